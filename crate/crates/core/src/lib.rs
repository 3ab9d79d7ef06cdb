//! Numerical and combinatorial verification of a sieve lower bound
//! for `‖αp² + βp + γ‖ < p^(-ρ)` with ρ = 37/210.
//!
//! The crate is split by concern:
//!
//! * [`exponents`]: exact rational exponent algebra and the inequality ledger.
//! * [`sievefn`]: Buchstab's ω, the Mertens product and the linear-sieve `F`.
//! * [`quadrature`]: nested adaptive Gauss–Kronrod cubature over convex polytopes.
//! * [`integrals`]: the catalog of sieve integrals `J1 … J9` and their bound checks.
//! * [`arithmetic`]: desk-scale brute-force realizations: primes, convergents,
//!   sifting counts, representation counts and Type I/II exponential sums.
//!
//! Everything that is shared by the command-line front end is re-exported at
//! the crate root.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod error;
pub mod exact;
pub mod exponents;
pub mod integrals;
pub mod quadrature;
pub mod sievefn;

pub use error::{Error, Result};
pub use exact::{parse_rational, Q};
pub use exponents::{
    check_extra_variable, check_type1_hypotheses, check_type2_hypotheses, find_subproduct, sieve_level_claims, verify_ledger,
    ConstraintReport, ExponentInterval, ExponentParams, Relation,
};
pub use integrals::{
    evaluate_final_sum, evaluate_j, IntegralId, IntegralOptions, J8Endpoints, J9Variant, JResult, Reading, SumReport,
};
pub use quadrature::QuadratureResult;
pub use sievefn::{buchstab_omega, linear_sieve_f, mertens_product, BuchstabTable};

/// Version tag written into every JSON document produced by the toolkit.
pub const SCHEMA_VERSION: u32 = 1;
