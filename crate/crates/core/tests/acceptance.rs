//! One test per acceptance criterion. Each prints a single
//! `criterion N <name>: PASS|FAIL <detail>` line (run with `--nocapture`
//! to see them) and asserts the criterion.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sievecalc_core::arithmetic::{
    buchstab_identity_check, decomposition_check, primes_up_to, representation_spectrum, representation_spectrum_naive,
    search_solutions, type1_sum, type2_sum_with, ApproximatingPolynomial, Real, SearchConfig, SumOptions,
    Type2Coefficients,
};
use sievecalc_core::exponents::Relation;
use sievecalc_core::integrals::{printed_bounds_sum, PRINTED_TOTAL, TARGET_TOTAL};
use sievecalc_core::sievefn::BuchstabTable;
use sievecalc_core::{
    evaluate_final_sum, find_subproduct, verify_ledger, ExponentParams, IntegralOptions, Reading, SumReport, Q,
};

/// Quadrature tolerance for the integral bounds.
const INTEGRAL_TOL: f64 = 1e-7;
const INTEGRAL_TIME_LIMIT: Duration = Duration::from_secs(120);
/// Sum of the eight printed bounds.
const PRINTED_BOUNDS_SUM: f64 = 0.994533;
const OMEGA_CLOSED_FORM_TOL: f64 = 1e-9;
const OMEGA_UPPER: f64 = 0.5672;
const OMEGA_UPPER_FROM: f64 = 1.7631;
const OMEGA_LOWER: f64 = 0.561_459_483_6 - 2.1e-8;
const IDENTITY_TRIALS: usize = 1000;
const IDENTITY_MAX_SET: usize = 10_000;
const SPECTRUM_MAX: u64 = 16;
const SUBPRODUCT_TRIALS: usize = 10_000;
const SUBPRODUCT_MAX_T: usize = 20;
const SEARCH_N_MAX: u64 = 1_000_000;
const TYPE_SUM_REL_TOL: f64 = 1e-8;

fn line(n: u32, name: &str, pass: bool, detail: impl AsRef<str>) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n} {name}: {verdict} {}", detail.as_ref());
}

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn sum_summary(r: &SumReport) -> String {
    let failing: Vec<String> = r
        .terms
        .iter()
        .filter(|t| t.satisfied == Some(false))
        .map(|t| format!("{}={:.6}>{}", t.id, t.value, t.bound.unwrap()))
        .collect();
    format!(
        "[{:?}] sum={:.6} (err {:.1e}) vs {PRINTED_TOTAL} and {TARGET_TOTAL}; over bound: {}",
        r.reading,
        r.sum,
        r.error,
        if failing.is_empty() { "none".to_string() } else { failing.join(", ") }
    )
}

#[test]
fn criterion_1_integral_bounds() {
    let p = ExponentParams::default();
    let start = Instant::now();
    let default = IntegralOptions { tol: INTEGRAL_TOL, ..IntegralOptions::default() };
    let main = evaluate_final_sum(&p, &default).expect("integrals converge");
    let printed = evaluate_final_sum(&p, &IntegralOptions { reading: Reading::Printed, ..default }).unwrap();
    let elapsed = start.elapsed();
    for r in [&main, &printed] {
        for t in &r.terms {
            println!(
                "  {:?} {:6} value {:.9} error {:.1e} bound {:.6} {}",
                r.reading,
                t.id,
                t.value,
                t.error,
                t.bound.unwrap(),
                if t.satisfied == Some(true) { "ok" } else { "over" }
            );
        }
    }
    let pass = main.passed() && elapsed < INTEGRAL_TIME_LIMIT;
    line(1, "integral-bounds", pass, format!("{} in {:.1?}", sum_summary(&main), elapsed));
    line(1, "integral-bounds (printed reading, informational)", printed.passed(), sum_summary(&printed));
    assert!(pass, "integral bounds not met; see the decisions ledger for the analysis");
}

#[test]
fn criterion_2_printed_constants() {
    let s = printed_bounds_sum();
    let pass = (s - PRINTED_BOUNDS_SUM).abs() < 1e-12 && s <= PRINTED_TOTAL;
    line(2, "printed-constants", pass, format!("sum of printed bounds = {s:.6} <= {PRINTED_TOTAL}"));
    assert!(pass);
}

#[test]
fn criterion_3_buchstab_accuracy() {
    let start = Instant::now();
    let table = BuchstabTable::new(1e-12).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=1000 {
        let t = 1.0 + 2.0 * i as f64 / 1000.0;
        let exact = if t <= 2.0 { 1.0 / t } else { (1.0 + (t - 1.0).ln()) / t };
        worst = worst.max((table.omega(t).unwrap() - exact).abs());
    }
    let max_after =
        (0..=200_000).map(|i| OMEGA_UPPER_FROM + i as f64 * 2e-4).map(|t| table.eval(t)).fold(f64::MIN, f64::max);
    let min_tail = (0..=60_000).map(|i| 6.0 + i as f64 * 1e-4).map(|t| table.eval(t)).fold(f64::MAX, f64::min);
    let pass = worst <= OMEGA_CLOSED_FORM_TOL && max_after <= OMEGA_UPPER && min_tail >= OMEGA_LOWER;
    line(
        3,
        "buchstab-accuracy",
        pass,
        format!(
            "closed-form error {worst:.1e}; max on [1.7631, 41.76] {max_after:.7}; min on [6, 12] {min_tail:.12} in {:.1?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_exponent_ledger() {
    let mut pass = true;
    for sigma in [q(1, 105), q(1, 102)] {
        let p = ExponentParams::from_sigma(sigma.clone()).unwrap();
        let r = verify_ledger(&p);
        let failed: Vec<&str> = r.iter().filter(|c| !c.satisfied).map(|c| c.id.as_str()).collect();
        let ties: Vec<&str> =
            r.iter().filter(|c| c.relation == Relation::Lt && !c.strict_holds).map(|c| c.id.as_str()).collect();
        let positive: Vec<f64> = r.iter().map(|c| c.slack.to_f64().unwrap()).filter(|&s| s > 0.0).collect();
        let min_positive = positive.iter().copied().fold(f64::INFINITY, f64::min);
        // Non-strict constraints attained at the closed end of their range.
        let tight = r.iter().filter(|c| matches!(c.relation, Relation::Le | Relation::Ll) && c.slack.is_zero()).count();
        let ok = failed.is_empty();
        pass &= ok;
        line(
            4,
            "exponent-ledger",
            ok,
            format!(
                "sigma={sigma}: {} constraints, failed {:?}, {} with positive slack (min {min_positive:.6}), \
                 {tight} non-strict attained with equality, zero-slack strict {:?}",
                r.len(),
                failed,
                positive.len(),
                ties
            ),
        );
        if sigma == q(1, 105) {
            assert!(ties.is_empty(), "interior sigma must have positive slack everywhere");
        }
    }
    assert!(pass);
}

#[test]
fn criterion_5_exact_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let p = ExponentParams::default();
    let mut failures = 0usize;
    for _ in 0..IDENTITY_TRIALS {
        let n: u64 = rng.gen_range(100..=100_000);
        let size = rng.gen_range(0..=IDENTITY_MAX_SET.min(n as usize));
        let set: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=n)).collect();
        let z2 = rng.gen_range(2..=100u64);
        let z1 = rng.gen_range(z2..=100u64);
        if !buchstab_identity_check(&set, z1, z2).unwrap().holds {
            failures += 1;
        }
        if !decomposition_check(n, &p, Some(&set)).unwrap().all_hold() {
            failures += 1;
        }
    }
    let default_set = decomposition_check(1000, &p, None).unwrap();
    let pass = failures == 0 && default_set.all_hold();
    line(
        5,
        "exact-identities",
        pass,
        format!(
            "{IDENTITY_TRIALS} random sets, {failures} failures; (500, 1000] holds: {} in {:.1?}",
            default_set.all_hold(),
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_spectrum_oracle() {
    let mut mismatches = 0;
    for l in 1..=SPECTRUM_MAX {
        for y in 1..=SPECTRUM_MAX {
            let s = representation_spectrum(l, y, u64::MAX).unwrap();
            let symmetric = s.counts.iter().all(|(&n, &c)| s.r(-n) == c);
            if s.counts != representation_spectrum_naive(l, y) || s.moment1 != ((l * y) as u128).pow(2) || !symmetric {
                mismatches += 1;
            }
        }
    }
    let pass = mismatches == 0;
    line(6, "spectrum-oracle", pass, format!("{} instances, {mismatches} mismatches", SPECTRUM_MAX * SPECTRUM_MAX));
    assert!(pass);
}

/// Whether some subset of `parts` sums into `[g, f]`.
fn exhaustive_exists(parts: &[i64], g: i64, f: i64) -> bool {
    (1u32..(1 << parts.len())).any(|mask| {
        let s: i64 = parts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum();
        g <= s && s <= f
    })
}

#[test]
fn criterion_7_subproduct_oracle() {
    let p = ExponentParams::default();
    let d: i64 = 210_000_000;
    let f: i64 = 62_000_000; // (1/3 − 4σ) · d at σ = 1/105
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut done, mut bad) = (0usize, 0usize);
    while done < SUBPRODUCT_TRIALS {
        let t = rng.gen_range(2..=SUBPRODUCT_MAX_T);
        let gamma = rng.gen_range(f + 1..2 * f);
        // Random composition of γ into t nonnegative parts.
        let mut cuts: Vec<i64> = (0..t - 1).map(|_| rng.gen_range(0..=gamma)).collect();
        cuts.push(0);
        cuts.push(gamma);
        cuts.sort_unstable();
        let mut parts: Vec<i64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let g_cap = (f / 2).min(gamma - parts[0]);
        if g_cap <= 0 {
            continue;
        }
        let g = rng.gen_range(1..=g_cap);
        let rhos: Vec<Q> = parts.iter().map(|&r| q(r, d)).collect();
        let ok = match find_subproduct(&rhos, &q(g, d), &p) {
            Ok(idx) => {
                let s: i64 = idx.iter().map(|&i| parts[i]).sum();
                g <= s && s <= f && exhaustive_exists(&parts, g, f)
            }
            Err(_) => false,
        };
        bad += usize::from(!ok);
        done += 1;
    }
    let pass = bad == 0;
    line(7, "subproduct-oracle", pass, format!("{done} instances with t <= {SUBPRODUCT_MAX_T}, {bad} failures"));
    assert!(pass);
}

/// `‖√2 p²‖ < p^(−37/210)` from the integer square root of `2p⁴·10^(2K)`.
fn sqrt2_oracle(primes: &[u64]) -> Vec<(u64, f64)> {
    const K: u32 = 48;
    let scale = BigUint::from(10u32).pow(K);
    let mut hits = Vec::new();
    for &p in primes {
        let p4 = BigUint::from(p).pow(4);
        let root = (BigUint::from(2u32) * p4 * &scale * &scale).sqrt();
        let r = &root % &scale;
        let other = &scale - &r;
        let dist = if r <= other { r } else { other };
        // Truncation error of `root` is below one unit; 10^(−48) never matters.
        let value = dist.to_f64().unwrap() / 1e48;
        let log_gap = value.ln() + 37.0 / 210.0 * (p as f64).ln();
        let hit = if log_gap.abs() > 1e-9 {
            log_gap < 0.0
        } else {
            // d^210 · p^37 < 10^(48·210)
            !dist.is_zero() && dist.pow(210) * BigUint::from(p).pow(37) < scale.pow(210)
        };
        if hit {
            hits.push((p, value));
        }
    }
    hits
}

#[test]
fn criterion_8_search_reproducibility() {
    let start = Instant::now();
    let cfg =
        SearchConfig::new(Real::sqrt(2, SearchConfig::recommended_digits(SEARCH_N_MAX)), q(37, 210), SEARCH_N_MAX);
    let out = search_solutions(&cfg).unwrap();
    let oracle = sqrt2_oracle(&primes_up_to(SEARCH_N_MAX));
    let same_set = out.hits.len() == oracle.len() && out.hits.iter().zip(&oracle).all(|(h, o)| h.p == o.0);
    let max_value_diff = out.hits.iter().zip(&oracle).map(|(h, o)| (h.value - o.1).abs()).fold(0.0, f64::max);
    let pass = same_set && !out.hits.is_empty() && max_value_diff < 1e-15;
    line(
        8,
        "search-reproducibility",
        pass,
        format!(
            "{} hits among {} primes, oracle {} hits, identical: {same_set}, max |value diff| {max_value_diff:.1e} in {:.1?}",
            out.hits.len(),
            out.primes_tested,
            oracle.len(),
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_type_sums() {
    let p = ExponentParams::default();
    let opts = SumOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let q_ = rng.gen_range(1..400u64);
        let a = loop {
            let a = rng.gen_range(-500..500i64);
            if num_integer::gcd(a.unsigned_abs(), q_) == 1 {
                break a;
            }
        };
        let (beta, gamma) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let poly = ApproximatingPolynomial::new(a, q_, beta, gamma).unwrap();
        let n = rng.gen_range(1000..=10_000u64);
        let l = rng.gen_range(1..=5u64);
        let (v, w) = (rng.gen_range(1.0..8.0), rng.gen_range(1.0..8.0));
        let t1 = type1_sum(&p, n, v, w, &poly, l, &opts).unwrap();
        let naive = common::type1_naive(a, q_, beta, gamma, n, v, w, l);
        worst = worst.max((t1.magnitude - naive).abs() / naive.abs().max(1.0));

        let y = rng.gen_range(1.0..100.0);
        let c = Type2Coefficients::generate(rng.gen(), n, y, l);
        let t2 = type2_sum_with(&p, n, y, &poly, l, &c, &opts).unwrap();
        let (re, im) = common::type2_naive(a, q_, beta, gamma, n, y, l, &c.c, &c.b, &c.a);
        let (vre, vim) = t2.value.unwrap();
        let mag = (re * re + im * im).sqrt().max(1.0);
        worst = worst.max((vre - re).hypot(vim - im) / mag);
    }

    // Empirical ratio at the sizes of the main argument; reported only.
    let n = 1_000_000u64;
    let cfg = SearchConfig::new(Real::sqrt(2, 60), q(37, 210), n);
    let q_max = (cfg.l1().sqrt() * n as f64) as u64;
    let poly = ApproximatingPolynomial::from_convergent(&cfg.alpha, q_max, 0.0, 0.0).unwrap();
    let l = cfg.big_l().floor() as u64;
    let v = (n as f64).powf(0.2);
    let t1 = type1_sum(&p, n, v, v, &poly, l, &opts).unwrap();
    let c = Type2Coefficients::generate(9, n, (n as f64).powf(0.4), l);
    let t2 = type2_sum_with(&p, n, (n as f64).powf(0.4), &poly, l, &c, &opts).unwrap();

    let pass = worst <= TYPE_SUM_REL_TOL;
    line(
        9,
        "type-sums",
        pass,
        format!(
            "worst relative deviation from naive loops {worst:.1e}; at N=1e6 with q={}: Type I T/N={:.4}, Type II |S|/N={:.4} (empirical)",
            poly.q, t1.ratio, t2.ratio
        ),
    );
    assert!(pass);
}
