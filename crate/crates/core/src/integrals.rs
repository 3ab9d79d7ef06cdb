//! The catalog of sieve integrals that bound the discarded parts of the
//! decomposition, with their printed upper bounds and the final sum check.
//!
//! Variables are exponents of `2N`: a prime `p_i = (2N)^{α_i}` contributes
//! `dα_i/α_i`, and the last, unsifted factor contributes `1/(1 − Σ α_i)`.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::exponents::{ExponentParams, ParamsF64};
use crate::quadrature::{integrate, Polytope, QuadratureOptions, QuadratureResult};
use crate::sievefn::BuchstabTable;
use crate::{Error, Result};

/// Pointwise majorant of ω used for the four-prime integral.
pub const OMEGA_MAJORANT: f64 = 0.59775;
/// Smallest ω argument `(1 − x − y − z − w)/w` over the four-prime region,
/// attained at `x = y = z = w = ρ`. Replacing ω by [`OMEGA_MAJORANT`] is
/// valid when this is at least `1/OMEGA_MAJORANT`: ω(t) = 1/t on `[1, 2]`
/// and ω stays below 0.5672 beyond 2.
pub fn j1_min_omega_argument(params: &ExponentParams) -> f64 {
    1.0 / params.as_f64().rho - 4.0
}

/// Printed value of the final sum.
pub const PRINTED_TOTAL: f64 = 0.994569;
/// `1 − 1/200`, the margin the sum must stay below.
pub const TARGET_TOTAL: f64 = 0.995;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IntegralId {
    #[serde(rename = "J1_4D")]
    J1FourDim,
    J1,
    J2,
    J3,
    J4,
    J5,
    J6,
    J7,
    J8,
    #[serde(rename = "J9_I6")]
    J9I6,
    #[serde(rename = "J9_I7")]
    J9I7,
}

impl IntegralId {
    pub const ALL: [IntegralId; 11] = [
        IntegralId::J1FourDim,
        IntegralId::J1,
        IntegralId::J2,
        IntegralId::J3,
        IntegralId::J4,
        IntegralId::J5,
        IntegralId::J6,
        IntegralId::J7,
        IntegralId::J8,
        IntegralId::J9I6,
        IntegralId::J9I7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegralId::J1FourDim => "J1_4D",
            IntegralId::J1 => "J1",
            IntegralId::J2 => "J2",
            IntegralId::J3 => "J3",
            IntegralId::J4 => "J4",
            IntegralId::J5 => "J5",
            IntegralId::J6 => "J6",
            IntegralId::J7 => "J7",
            IntegralId::J8 => "J8",
            IntegralId::J9I6 => "J9_I6",
            IntegralId::J9I7 => "J9_I7",
        }
    }

    /// Printed upper bound, if the integral has one of its own.
    pub fn printed_bound(self) -> Option<f64> {
        match self {
            IntegralId::J1 => Some(0.000691),
            IntegralId::J2 => Some(0.059343),
            IntegralId::J3 => Some(0.118914),
            IntegralId::J4 => Some(0.027404),
            IntegralId::J5 => Some(0.000245),
            IntegralId::J6 => Some(0.060205),
            IntegralId::J7 => Some(0.000237),
            IntegralId::J9I6 | IntegralId::J9I7 => Some(0.727494),
            IntegralId::J1FourDim | IntegralId::J8 => None,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            IntegralId::J1FourDim | IntegralId::J5 => 4,
            IntegralId::J4 | IntegralId::J7 => 3,
            IntegralId::J9I6 | IntegralId::J9I7 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for IntegralId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegralId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IntegralId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse("integral id", s))
    }
}

/// Which transcription of the regions to integrate.
///
/// `Printed` follows the displayed limits literally. `Reconstructed` uses the
/// limits implied by the prime-factor patterns each integral counts: the
/// second prime of the one-large-factor pattern runs up to `ρ`, the four-prime
/// pattern keeps its primes ordered, and the sieve-range correction uses the
/// level `Z = N^{ρ/2}` inside ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    Printed,
    #[default]
    Reconstructed,
}

impl FromStr for Reading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "printed" => Ok(Reading::Printed),
            "reconstructed" => Ok(Reading::Reconstructed),
            _ => Err(Error::parse("reading", s)),
        }
    }
}

/// Range of the large prime in the linear-sieve correction integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum J9Variant {
    #[default]
    I6,
    I7,
}

impl J9Variant {
    pub fn id(self) -> IntegralId {
        match self {
            J9Variant::I6 => IntegralId::J9I6,
            J9Variant::I7 => IntegralId::J9I7,
        }
    }
}

impl FromStr for J9Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i6" => Ok(J9Variant::I6),
            "i7" => Ok(J9Variant::I7),
            _ => Err(Error::parse("J9 variant", s)),
        }
    }
}

/// Endpoints for the two-prime sieve-range integral: the repaired ones that
/// agree with the interval system, or the literal printed ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum J8Endpoints {
    /// `x ≤ 3/8 + 33σ/4`, `y ≥ ρ/2`.
    #[default]
    Repaired,
    /// `x ≤ 3/8 + 33σ/8`, `y ≥ 1/12` (the `δ/2` term vanishes as `N → ∞`).
    Printed,
}

impl FromStr for J8Endpoints {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "repaired" => Ok(J8Endpoints::Repaired),
            "printed" => Ok(J8Endpoints::Printed),
            _ => Err(Error::parse("J8 endpoints", s)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralOptions {
    pub tol: f64,
    pub reading: Reading,
    pub j9: J9Variant,
    pub j8: J8Endpoints,
    /// Accuracy of the ω table used inside integrands.
    pub omega_tol: f64,
    pub max_evals: u64,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            reading: Reading::default(),
            j9: J9Variant::default(),
            j8: J8Endpoints::default(),
            omega_tol: 1e-10,
            max_evals: QuadratureOptions::default().max_evals,
        }
    }
}

type Integrand = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Region, integrand and bookkeeping for one catalog entry.
pub struct IntegralSpec {
    pub id: IntegralId,
    pub region: Polytope,
    pub integrand: Integrand,
    /// Linear forms `coef · x + c0` that appear in denominators; each must be
    /// bounded below by a positive margin on the region.
    pub denominators: Vec<(Vec<f64>, f64, &'static str)>,
    /// Upper bound on `∫ |∂ integrand / ∂ω|`, multiplied by the ω table
    /// tolerance to give the tracked table error. Zero if ω is not used.
    omega_weight: OmegaWeight,
}

enum OmegaWeight {
    None,
    /// ω ≥ 1/2, so the weight is at most twice the integral itself.
    TwiceValue,
    Fixed(f64),
}

fn omega_table(tol: f64) -> Result<Arc<BuchstabTable>> {
    static DEFAULT: OnceLock<Arc<BuchstabTable>> = OnceLock::new();
    let default_tol = IntegralOptions::default().omega_tol;
    if tol == default_tol {
        if let Some(t) = DEFAULT.get() {
            return Ok(t.clone());
        }
        let t = Arc::new(BuchstabTable::new(tol)?);
        return Ok(DEFAULT.get_or_init(|| t).clone());
    }
    Ok(Arc::new(BuchstabTable::new(tol)?))
}

/// Builds the catalog entry for `id`.
pub fn spec(
    id: IntegralId,
    params: &ExponentParams,
    reading: Reading,
    j8: J8Endpoints,
    omega: Arc<BuchstabTable>,
) -> IntegralSpec {
    let ParamsF64 { rho, sigma: s, b, f } = params.as_f64();
    let i4_hi = 1.0 / 3.0 + 8.0 * s;
    let i5_hi = 0.5 - 9.0 * s;
    let i7_lo = 0.375 + 8.25 * s;
    let pos = |n: usize| -> Vec<(Vec<f64>, f64, &'static str)> {
        (0..n)
            .map(|k| {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                (e, 0.0, "variable")
            })
            .collect()
    };
    let mut denominators;
    let region;
    let integrand: Integrand;
    let mut omega_weight = OmegaWeight::None;

    match id {
        IntegralId::J1FourDim => {
            // (x, y, z, w): b ≤ w ≤ z ≤ y ≤ x < ρ, z + w > f
            let mut r = Polytope::new(4)
                .ge(&[0.0, 0.0, 0.0, 1.0], b)
                .le(&[0.0, 0.0, -1.0, 1.0], 0.0)
                .le(&[0.0, -1.0, 1.0, 0.0], 0.0)
                .le(&[-1.0, 1.0, 0.0, 0.0], 0.0)
                .le(&[1.0, 0.0, 0.0, 0.0], rho)
                .ge(&[0.0, 0.0, 1.0, 1.0], f);
            // ω is only piecewise smooth: kinks where t = (1−x−y−z−w)/w is an integer.
            for k in 2..=6 {
                r = r.cut(&[1.0, 1.0, 1.0, 1.0 + k as f64], 1.0);
            }
            region = r;
            denominators = pos(4);
            denominators.push((vec![-1.0, -1.0, -1.0, -2.0], 1.0, "1-x-y-z-2w (omega argument >= 1)"));
            let om = omega;
            integrand = Box::new(move |v| {
                let (x, y, z, w) = (v[0], v[1], v[2], v[3]);
                om.eval((1.0 - x - y - z - w) / w) / (x * y * z * w * w)
            });
            omega_weight = OmegaWeight::TwiceValue;
        }
        IntegralId::J1 => {
            // (z, y): f/2 < z ≤ y ≤ ρ
            region = Polytope::new(2).bounds(0, f / 2.0, rho).le(&[1.0, -1.0], 0.0).le(&[0.0, 1.0], rho);
            denominators = pos(2);
            denominators.push((vec![-1.0, 0.0], f, "f-z"));
            integrand = Box::new(move |v| {
                let (z, y) = (v[0], v[1]);
                OMEGA_MAJORANT / (y * z) * (1.0 / (f - z) - 1.0 / z) * (rho / y).ln()
            });
        }
        IntegralId::J2 => {
            region = Polytope::new(2).bounds(0, f, i4_hi).ge(&[0.0, 1.0], f).le(&[-1.0, 1.0], 0.0).le(&[1.0, 2.0], 1.0);
            denominators = two_prime_denominators();
            integrand = Box::new(two_prime);
        }
        IntegralId::J3 => {
            let y_hi = match reading {
                Reading::Printed => 1.0 / 6.0,
                Reading::Reconstructed => rho,
            };
            region = Polytope::new(2).bounds(0, f, i4_hi).bounds(1, f / 2.0, y_hi);
            denominators = two_prime_denominators();
            integrand = Box::new(two_prime);
        }
        IntegralId::J4 => {
            region = three_prime_mid(f, i4_hi, rho);
            denominators = three_prime_denominators();
            integrand = Box::new(three_prime);
        }
        IntegralId::J5 => {
            // (x, y, z, w): J4's region, the last prime below N^ρ and above w.
            let mut r = Polytope::new(4)
                .bounds(0, f, i4_hi)
                .bounds(1, f / 2.0, rho)
                .le(&[0.0, 1.0, -1.0, 0.0], 0.0)
                .ge(&[0.0, 1.0, 1.0, 0.0], f)
                .le(&[0.0, 0.0, 1.0, 0.0], rho)
                .ge(&[1.0, 1.0, 1.0, 1.0], 1.0 - rho)
                .le(&[1.0, 1.0, 1.0, 2.0], 1.0);
            if reading == Reading::Reconstructed {
                r = r.le(&[0.0, 0.0, 1.0, -1.0], 0.0);
            }
            region = r;
            denominators = pos(4);
            // Majorant 1/(w(1−x−y−z−w)) ≤ 1/w² from 1−x−y−z−w ≥ w.
            integrand = Box::new(|v| 1.0 / (v[0] * v[1] * v[2] * v[3] * v[3]));
        }
        IntegralId::J6 => {
            region = Polytope::new(2).bounds(0, i7_lo, 0.5).bounds(1, b, rho);
            denominators = two_prime_denominators();
            integrand = Box::new(two_prime);
        }
        IntegralId::J7 => {
            // (x, y, z) with ρ > 1−x−y−z > z.
            region = Polytope::new(3)
                .bounds(0, i7_lo, 0.5)
                .bounds(1, f / 2.0, rho)
                .le(&[0.0, 1.0, -1.0], 0.0)
                .le(&[0.0, 0.0, 1.0], rho)
                .ge(&[1.0, 1.0, 1.0], 1.0 - rho)
                .le(&[1.0, 1.0, 2.0], 1.0);
            denominators = three_prime_denominators();
            integrand = Box::new(three_prime);
        }
        IntegralId::J8 => {
            let (x_hi, y_lo) = match j8 {
                J8Endpoints::Repaired => (i7_lo, rho / 2.0),
                J8Endpoints::Printed => (0.375 + 33.0 * s / 8.0, 1.0 / 12.0),
            };
            region = Polytope::new(2).bounds(0, i5_hi, x_hi).bounds(1, y_lo, rho);
            denominators = two_prime_denominators();
            integrand = Box::new(two_prime);
        }
        IntegralId::J9I6 | IntegralId::J9I7 => {
            let (lo, hi) = if id == IntegralId::J9I6 { (i5_hi, i7_lo) } else { (i7_lo, 0.5) };
            // Level inside ω: b as displayed, or ρ for Z = N^{ρ/2}.
            let c = match reading {
                Reading::Printed => b,
                Reading::Reconstructed => rho,
            };
            let mut r = Polytope::new(1).bounds(0, lo, hi);
            for k in 2..=20 {
                r = r.cut(&[1.0], 1.0 - k as f64 * c / 2.0);
            }
            region = r;
            denominators = vec![
                (vec![1.0], 0.0, "x"),
                (vec![-1.0], 2.0 / 3.0 - 8.0 * s, "2/3-8s-x"),
                (vec![-1.0], 1.0 - rho, "1-x-rho"),
            ];
            let om = omega;
            integrand = Box::new(move |v| {
                let x = v[0];
                let sieve = 2.0 / (2.0 / 3.0 - 8.0 * s - x);
                let main = 2.0 / c * om.eval((1.0 - x) / (c / 2.0));
                let inner = ((rho / (1.0 - x - rho)).ln() - ((rho / 2.0) / (1.0 - x - rho / 2.0)).ln()) / (1.0 - x);
                (sieve - main + inner) / x
            });
            omega_weight = OmegaWeight::Fixed(2.0 / c * (hi / lo).ln());
        }
    }
    IntegralSpec { id, region, integrand, denominators, omega_weight }
}

fn two_prime(v: &[f64]) -> f64 {
    let (x, y) = (v[0], v[1]);
    1.0 / (x * y * (1.0 - x - y))
}

fn three_prime(v: &[f64]) -> f64 {
    let (x, y, z) = (v[0], v[1], v[2]);
    1.0 / (x * y * z * (1.0 - x - y - z))
}

fn two_prime_denominators() -> Vec<(Vec<f64>, f64, &'static str)> {
    vec![(vec![1.0, 0.0], 0.0, "x"), (vec![0.0, 1.0], 0.0, "y"), (vec![-1.0, -1.0], 1.0, "1-x-y")]
}

fn three_prime_denominators() -> Vec<(Vec<f64>, f64, &'static str)> {
    vec![
        (vec![1.0, 0.0, 0.0], 0.0, "x"),
        (vec![0.0, 1.0, 0.0], 0.0, "y"),
        (vec![0.0, 0.0, 1.0], 0.0, "z"),
        (vec![-1.0, -1.0, -1.0], 1.0, "1-x-y-z"),
    ]
}

/// `x ∈ [f, 1/3+8σ]`, `y ∈ [f/2, ρ]`, `z ∈ [max(y, f−y), ρ]`.
fn three_prime_mid(f: f64, i4_hi: f64, rho: f64) -> Polytope {
    Polytope::new(3)
        .bounds(0, f, i4_hi)
        .bounds(1, f / 2.0, rho)
        .le(&[0.0, 1.0, -1.0], 0.0)
        .ge(&[0.0, 1.0, 1.0], f)
        .le(&[0.0, 0.0, 1.0], rho)
}

impl IntegralSpec {
    /// Smallest value of each denominator over the region (attained at a
    /// vertex). Empty regions report no margins.
    pub fn denominator_margins(&self) -> Vec<(&'static str, f64)> {
        self.denominators
            .iter()
            .filter_map(|(coef, c0, name)| self.region.min_linear(coef, *c0).map(|m| (*name, m)))
            .collect()
    }

    /// Rejects regions that touch a singularity of the integrand.
    pub fn check_singularity_margin(&self) -> Result<f64> {
        let margins = self.denominator_margins();
        let min = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        match margins.iter().find(|m| !(m.1 > 1e-9)) {
            Some((name, m)) => Err(Error::HypothesisViolation(format!(
                "{}: denominator {name} reaches {m:.3e} on the region",
                self.id
            ))),
            None => Ok(min),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.integrand)(x)
    }

    pub fn integrate(&self, opts: QuadratureOptions) -> QuadratureResult {
        integrate(&self.region, |x| (self.integrand)(x), opts)
    }
}

/// One evaluated catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JResult {
    pub id: IntegralId,
    pub value: f64,
    /// Quadrature error plus the tracked ω-table contribution.
    pub error: f64,
    pub bound: Option<f64>,
    /// `value − error ≤ bound`, when a bound exists.
    pub satisfied: Option<bool>,
    pub n_eval: u64,
    pub reading: Reading,
}

/// Evaluates catalog entry `id` and compares it with its printed bound.
pub fn evaluate_j(id: IntegralId, params: &ExponentParams, opts: &IntegralOptions) -> Result<JResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let table = omega_table(opts.omega_tol)?;
    let table_tol = table.tol();
    let sp = spec(id, params, opts.reading, opts.j8, table);
    sp.check_singularity_margin()?;
    let qopts = QuadratureOptions { tol: opts.tol, max_evals: opts.max_evals, ..Default::default() };
    let r = sp.integrate(qopts);
    if !r.converged {
        return Err(Error::NoConvergence {
            id: id.name().to_owned(),
            value: r.value,
            error: r.abs_error_estimate,
            evaluations: r.n_evaluations,
        });
    }
    let omega_err = match sp.omega_weight {
        OmegaWeight::None => 0.0,
        OmegaWeight::TwiceValue => 2.0 * r.value.abs() * table_tol,
        OmegaWeight::Fixed(w) => w * table_tol,
    };
    let error = r.abs_error_estimate + omega_err;
    let bound = id.printed_bound();
    Ok(JResult {
        id,
        value: r.value,
        error,
        bound,
        satisfied: bound.map(|b| r.value - error <= b),
        n_eval: r.n_evaluations,
        reading: opts.reading,
    })
}

/// The eight integrals that make up the final sum, in order.
pub fn sum_terms(j9: J9Variant) -> [IntegralId; 8] {
    use IntegralId::*;
    [J1, J2, J3, J4, J5, J6, J7, j9.id()]
}

/// Sum of the printed bounds of the eight terms.
pub fn printed_bounds_sum() -> f64 {
    sum_terms(J9Variant::I6).iter().map(|id| id.printed_bound().expect("every sum term has a bound")).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumReport {
    pub reading: Reading,
    pub j9: J9Variant,
    pub terms: Vec<JResult>,
    pub sum: f64,
    pub error: f64,
    pub printed_total: f64,
    pub printed_bounds_sum: f64,
    pub target: f64,
    /// `sum − error ≤ 0.994569`.
    pub below_printed_total: bool,
    /// `sum − error < 0.995`.
    pub below_target: bool,
    pub all_terms_within_bounds: bool,
}

impl SumReport {
    pub fn passed(&self) -> bool {
        self.below_printed_total && self.below_target && self.all_terms_within_bounds
    }
}

/// Evaluates `J1 + … + J7 + J9` and every individual bound.
pub fn evaluate_final_sum(params: &ExponentParams, opts: &IntegralOptions) -> Result<SumReport> {
    let terms = sum_terms(opts.j9).iter().map(|&id| evaluate_j(id, params, opts)).collect::<Result<Vec<_>>>()?;
    let sum: f64 = terms.iter().map(|t| t.value).sum();
    let error: f64 = terms.iter().map(|t| t.error).sum();
    Ok(SumReport {
        reading: opts.reading,
        j9: opts.j9,
        all_terms_within_bounds: terms.iter().all(|t| t.satisfied != Some(false)),
        terms,
        sum,
        error,
        printed_total: PRINTED_TOTAL,
        printed_bounds_sum: printed_bounds_sum(),
        target: TARGET_TOTAL,
        below_printed_total: sum - error <= PRINTED_TOTAL,
        below_target: sum - error < TARGET_TOTAL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_bounds_add_up() {
        let s = printed_bounds_sum();
        assert!((s - 0.994533).abs() < 1e-12, "{s}");
        assert!(s <= PRINTED_TOTAL);
        const { assert!(PRINTED_TOTAL < TARGET_TOTAL) };
    }

    #[test]
    fn ids_round_trip() {
        for id in IntegralId::ALL {
            assert_eq!(id.name().parse::<IntegralId>().unwrap(), id);
        }
    }

    #[test]
    fn regions_avoid_singularities() {
        let p = ExponentParams::default();
        let table = omega_table(1e-10).unwrap();
        for id in IntegralId::ALL {
            for reading in [Reading::Printed, Reading::Reconstructed] {
                let sp = spec(id, &p, reading, J8Endpoints::Repaired, table.clone());
                sp.check_singularity_margin().unwrap();
            }
        }
    }

    #[test]
    fn printed_j8_is_degenerate_at_working_sigma() {
        let p = ExponentParams::default();
        let table = omega_table(1e-10).unwrap();
        let sp = spec(IntegralId::J8, &p, Reading::Printed, J8Endpoints::Printed, table);
        let r = sp.integrate(QuadratureOptions::default());
        assert!(r.value.abs() < 1e-12);
    }
}
