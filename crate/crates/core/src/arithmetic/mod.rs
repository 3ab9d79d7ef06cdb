//! Desk-scale brute-force realizations of the arithmetic objects: primes,
//! convergents, the prime search, sifting counts with exact identity checks,
//! representation counts and Type I/II exponential sums.

mod budget;
mod convergents;
mod expsum;
mod primes;
mod real;
mod search;
mod sifting;
mod spectrum;

pub use budget::{default_budget, parse_count, BUDGET_ENV, DEFAULT_BUDGET};
pub use convergents::{best_convergent, convergents, required_digits, Convergent};
pub use expsum::{
    dyadic, interval_for, type1_sum, type2_sum, type2_sum_with, ApproximatingPolynomial, Compensated, SumOptions,
    Type2Coefficients, TypeSumReport,
};
pub use primes::{is_prime_trial, lpf_table, primes_up_to};
pub use real::{fractional_distance, Real};
pub use search::{search_solutions, SearchConfig, SearchHit, SearchMode, SearchOutcome, SetAStats};
pub use sifting::{
    buchstab_identity_check, decomposition_check, multiples_quotient, sift_count, BuchstabReport, BuchstabTerm,
    DecompositionReport, IdentityCheck, PrimeRange, DECOMPOSITION_MAX_N,
};
pub use spectrum::{representation_spectrum, representation_spectrum_naive, RepresentationSpectrum};
