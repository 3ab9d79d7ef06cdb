use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::budget::check_budget;
use super::convergents::best_convergent;
use super::real::Real;
use crate::exact::Q;
use crate::exponents::{check_type1_hypotheses, check_type2_hypotheses, ConstraintReport, ExponentParams};
use crate::{Error, Result};

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// `g(x) = (a/q)x² + βx + γ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximatingPolynomial {
    pub a: i64,
    pub q: u64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(skip)]
    beta_fixed: u64,
    #[serde(skip)]
    gamma_fixed: u64,
}

/// `frac(x)` as a 64-bit binary fraction.
fn to_fixed(x: f64) -> u64 {
    let f = x - x.floor();
    let v = (f * TWO_POW_64).round();
    if v >= TWO_POW_64 {
        0
    } else {
        v as u64
    }
}

impl ApproximatingPolynomial {
    /// Requires `q ≥ 1` and `gcd(a, q) = 1`.
    pub fn new(a: i64, q: u64, beta: f64, gamma: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::HypothesisViolation("q must be positive".into()));
        }
        if a.unsigned_abs().gcd(&q) != 1 {
            return Err(Error::HypothesisViolation(format!("{a}/{q} is not in lowest terms")));
        }
        if !(beta.is_finite() && gamma.is_finite()) {
            return Err(Error::Domain("beta and gamma must be finite".into()));
        }
        Ok(Self { a, q, beta, gamma, beta_fixed: to_fixed(beta), gamma_fixed: to_fixed(gamma) })
    }

    /// As [`Self::new`], also requiring `|α − a/q| < 1/q²` for the source `α`.
    pub fn with_alpha(a: i64, q: u64, beta: f64, gamma: f64, alpha: &Real) -> Result<Self> {
        let poly = Self::new(a, q, beta, gamma)?;
        let (lo, hi, den) = alpha.enclosure();
        let (qb, ab) = (BigInt::from(q), BigInt::from(a));
        for x in [lo, hi] {
            if (&x * &qb - &ab * &den).abs() * &qb >= den {
                return Err(Error::HypothesisViolation(format!("|alpha - {a}/{q}| < 1/q^2 fails or is not certified")));
            }
        }
        Ok(poly)
    }

    /// Uses the last convergent of `alpha` with denominator at most `q_max`.
    pub fn from_convergent(alpha: &Real, q_max: u64, beta: f64, gamma: f64) -> Result<Self> {
        let c = best_convergent(alpha, q_max)?;
        Self::with_alpha(c.a, c.q, beta, gamma, alpha)
    }

    /// `ℓ g(x) mod 1` as a 64-bit binary fraction.
    pub fn phase(&self, ell: u64, x: u64) -> u64 {
        let q = self.q as u128;
        let la = ((self.a as i128).rem_euclid(q as i128) as u128 * (ell as u128 % q)) % q;
        let x2 = ((x as u128 % q) * (x as u128 % q)) % q;
        let r = (la * x2) % q;
        let quad = ((r << 64) / q) as u64;
        let lin = self.beta_fixed.wrapping_mul(ell.wrapping_mul(x));
        let con = self.gamma_fixed.wrapping_mul(ell);
        quad.wrapping_add(lin).wrapping_add(con)
    }

    /// `e(ℓ g(x))`.
    pub fn e(&self, ell: u64, x: u64) -> (f64, f64) {
        let theta = self.phase(ell, x) as f64 / TWO_POW_64 * std::f64::consts::TAU;
        let (s, c) = theta.sin_cos();
        (c, s)
    }
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexSum {
    re: Compensated,
    im: Compensated,
}

impl ComplexSum {
    fn add(&mut self, (re, im): (f64, f64)) {
        self.re.add(re);
        self.im.add(im);
    }

    fn value(&self) -> (f64, f64) {
        (self.re.value(), self.im.value())
    }
}

/// Integers of `(N/(2m), N/m]`, or of the sub-interval selected by `frac`
/// (fractions of the interval length, `0 ≤ s0 < s1 ≤ 1`).
pub fn interval_for(n: u64, m: u64, frac: Option<(f64, f64)>) -> (u64, u64) {
    let lo = n / (2 * m);
    let hi = n / m;
    match frac {
        None => (lo + 1, hi),
        Some((s0, s1)) => {
            let base = n as f64 / (2.0 * m as f64);
            let a = (base * (1.0 + s0)).floor() as u64;
            let b = (base * (1.0 + s1)).floor() as u64;
            (a.max(lo) + 1, b.min(hi))
        }
    }
}

/// Integers of the dyadic range `(V, 2V]`.
pub fn dyadic(v: f64) -> std::ops::RangeInclusive<u64> {
    (v.floor() as u64 + 1)..=((2.0 * v).floor() as u64)
}

fn count(range: (u64, u64)) -> u64 {
    range.1.saturating_sub(range.0) + u64::from(range.1 >= range.0)
}

#[derive(Debug, Clone, Copy)]
pub struct SumOptions {
    pub budget: u64,
    /// Sub-interval of `I(m)`; `None` is the full interval.
    pub subinterval: Option<(f64, f64)>,
    /// Runs every loop backwards; results must agree with the forward order.
    pub reverse: bool,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self { budget: super::budget::default_budget(), subinterval: None, reverse: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeSumReport {
    pub kind: u8,
    pub n: u64,
    pub l: u64,
    pub v: Option<f64>,
    pub w: Option<f64>,
    pub y: Option<f64>,
    pub poly: ApproximatingPolynomial,
    /// Real and imaginary parts of the signed sum (Type II only).
    pub value: Option<(f64, f64)>,
    /// `T` for Type I, `|Σ|` for Type II.
    pub magnitude: f64,
    /// `magnitude / N`.
    pub ratio: f64,
    pub terms: u64,
    /// Hypotheses evaluated at the exponents `log V / log N` etc., informational.
    pub hypotheses: Vec<ConstraintReport>,
}

/// Rational approximation of `log x / log N`, for reporting hypotheses.
fn exponent_of(x: f64, n: u64) -> Q {
    let e = x.ln() / (n as f64).ln();
    Q::new(BigInt::from((e * 1e9).round() as i64), BigInt::from(1_000_000_000))
}

fn ordered<T: Clone>(items: Vec<T>, reverse: bool) -> Vec<T> {
    if reverse {
        items.into_iter().rev().collect()
    } else {
        items
    }
}

/// `T = Σ_{ℓ≤L} Σ_{v∼V} Σ_{w∼W} |Σ_{n∈I(vw)} e(ℓ g(vwn))|`.
pub fn type1_sum(
    p: &ExponentParams,
    n: u64,
    v: f64,
    w: f64,
    poly: &ApproximatingPolynomial,
    l: u64,
    opts: &SumOptions,
) -> Result<TypeSumReport> {
    if !(v >= 1.0 && w >= 1.0) || n < 2 || l == 0 {
        return Err(Error::Domain("need V, W >= 1, N >= 2 and L >= 1".into()));
    }
    let vs: Vec<u64> = dyadic(v).collect();
    let ws: Vec<u64> = dyadic(w).collect();
    let per_l: u128 =
        vs.iter().flat_map(|&a| ws.iter().map(move |&b| count(interval_for(n, a * b, opts.subinterval)) as u128)).sum();
    check_budget(per_l * l as u128, opts.budget)?;

    let vs = ordered(vs, opts.reverse);
    let ws = ordered(ws, opts.reverse);
    let ells = ordered((1..=l).collect(), opts.reverse);
    let partials: Vec<f64> = vs
        .par_iter()
        .map(|&vv| {
            let mut acc = Compensated::default();
            for &ell in &ells {
                for &ww in &ws {
                    let m = vv * ww;
                    let (lo, hi) = interval_for(n, m, opts.subinterval);
                    let mut inner = ComplexSum::default();
                    let mut step = |k: u64| inner.add(poly.e(ell, m * k));
                    if opts.reverse {
                        (lo..=hi).rev().for_each(&mut step);
                    } else {
                        (lo..=hi).for_each(&mut step);
                    }
                    let (re, im) = inner.value();
                    acc.add(re.hypot(im));
                }
            }
            acc.value()
        })
        .collect();
    let mut total = Compensated::default();
    partials.iter().for_each(|&x| total.add(x));
    let t = total.value();
    Ok(TypeSumReport {
        kind: 1,
        n,
        l,
        v: Some(v),
        w: Some(w),
        y: None,
        poly: poly.clone(),
        value: None,
        magnitude: t,
        ratio: t / n as f64,
        terms: (per_l * l as u128) as u64,
        hypotheses: check_type1_hypotheses(&exponent_of(v, n), &exponent_of(w, n), p),
    })
}

/// `±1` coefficients `c_ℓ`, `b_y`, `a_x` of a Type II sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type2Coefficients {
    /// `c[ℓ − 1]`.
    pub c: Vec<i8>,
    /// `b[y − y_min]` for `y ∈ (Y, 2Y]`.
    pub b: Vec<i8>,
    /// `a[x − 1]` for `1 ≤ x ≤ N/Y`.
    pub a: Vec<i8>,
}

impl Type2Coefficients {
    /// Deterministic signs drawn in the order `c`, `b`, `a` from a ChaCha8
    /// stream seeded by `seed`.
    pub fn generate(seed: u64, n: u64, y: f64, l: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |k: usize| -> Vec<i8> { (0..k).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect() };
        let c = draw(l as usize);
        let b = draw(dyadic(y).count());
        let a = draw(x_max(n, y) as usize);
        Self { c, b, a }
    }

    pub fn ones(n: u64, y: f64, l: u64) -> Self {
        Self { c: vec![1; l as usize], b: vec![1; dyadic(y).count()], a: vec![1; x_max(n, y) as usize] }
    }
}

fn x_max(n: u64, y: f64) -> u64 {
    let y_min = y.floor() as u64 + 1;
    n / y_min
}

/// `Σ_{ℓ≤L} c_ℓ Σ_{y∼Y} b_y Σ_{x∈I(y)} a_x e(ℓ g(xy))` with seeded signs.
pub fn type2_sum(
    p: &ExponentParams,
    n: u64,
    y: f64,
    poly: &ApproximatingPolynomial,
    l: u64,
    seed: u64,
    opts: &SumOptions,
) -> Result<TypeSumReport> {
    let coeffs = Type2Coefficients::generate(seed, n, y, l);
    type2_sum_with(p, n, y, poly, l, &coeffs, opts)
}

/// [`type2_sum`] with explicit coefficients.
pub fn type2_sum_with(
    p: &ExponentParams,
    n: u64,
    y: f64,
    poly: &ApproximatingPolynomial,
    l: u64,
    coeffs: &Type2Coefficients,
    opts: &SumOptions,
) -> Result<TypeSumReport> {
    if !(y >= 1.0) || n < 2 || l == 0 {
        return Err(Error::Domain("need Y >= 1, N >= 2 and L >= 1".into()));
    }
    let ys: Vec<u64> = dyadic(y).collect();
    let y_min = *ys.first().ok_or_else(|| Error::Domain("empty dyadic range".into()))?;
    if coeffs.c.len() < l as usize || coeffs.b.len() < ys.len() || (coeffs.a.len() as u64) < x_max(n, y) {
        return Err(Error::Domain("coefficient vectors too short".into()));
    }
    let per_l: u128 = ys.iter().map(|&yy| count(interval_for(n, yy, opts.subinterval)) as u128).sum();
    check_budget(per_l * l as u128, opts.budget)?;

    let ys = ordered(ys, opts.reverse);
    let ells = ordered((1..=l).collect::<Vec<_>>(), opts.reverse);
    let partials: Vec<(f64, f64)> = ells
        .par_iter()
        .map(|&ell| {
            let mut acc = ComplexSum::default();
            for &yy in &ys {
                let (lo, hi) = interval_for(n, yy, opts.subinterval);
                let sign = f64::from(coeffs.c[ell as usize - 1] * coeffs.b[(yy - y_min) as usize]);
                let mut step = |x: u64| {
                    let (re, im) = poly.e(ell, x * yy);
                    let s = sign * f64::from(coeffs.a[x as usize - 1]);
                    acc.add((s * re, s * im));
                };
                if opts.reverse {
                    (lo..=hi).rev().for_each(&mut step);
                } else {
                    (lo..=hi).for_each(&mut step);
                }
            }
            acc.value()
        })
        .collect();
    let mut total = ComplexSum::default();
    partials.iter().for_each(|&z| total.add(z));
    let (re, im) = total.value();
    let mag = re.hypot(im);
    Ok(TypeSumReport {
        kind: 2,
        n,
        l,
        v: None,
        w: None,
        y: Some(y),
        poly: poly.clone(),
        value: Some((re, im)),
        magnitude: mag,
        ratio: mag / n as f64,
        terms: (per_l * l as u128) as u64,
        hypotheses: check_type2_hypotheses(&exponent_of(y, n), p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_poly() -> ApproximatingPolynomial {
        ApproximatingPolynomial::new(0, 1, 0.0, 0.0).unwrap()
    }

    #[test]
    fn trivial_phase_counts_lengths() {
        let p = ExponentParams::default();
        let opts = SumOptions::default();
        let r = type1_sum(&p, 10_000, 4.0, 3.0, &zero_poly(), 1, &opts).unwrap();
        let expect: u64 =
            dyadic(4.0).flat_map(|v| dyadic(3.0).map(move |w| count(interval_for(10_000, v * w, None)))).sum();
        assert_eq!(r.magnitude, expect as f64);
        let c = Type2Coefficients::ones(10_000, 10.0, 3);
        let r = type2_sum_with(&p, 10_000, 10.0, &zero_poly(), 3, &c, &opts).unwrap();
        let expect: u64 = dyadic(10.0).map(|y| count(interval_for(10_000, y, None))).sum();
        assert_eq!(r.magnitude, 3.0 * expect as f64);
    }

    #[test]
    fn lowest_terms_required() {
        assert!(ApproximatingPolynomial::new(2, 4, 0.0, 0.0).is_err());
        let alpha = Real::sqrt(2, 40);
        assert!(ApproximatingPolynomial::with_alpha(99, 70, 0.0, 0.0, &alpha).is_ok());
        assert!(ApproximatingPolynomial::with_alpha(3, 7, 0.0, 0.0, &alpha).is_err());
    }

    #[test]
    fn sign_flip_negates() {
        let p = ExponentParams::default();
        let poly = ApproximatingPolynomial::new(41, 29, 0.25, 0.1).unwrap();
        let opts = SumOptions::default();
        let mut c = Type2Coefficients::generate(7, 10_000, 100.0, 4);
        let r1 = type2_sum_with(&p, 10_000, 100.0, &poly, 4, &c, &opts).unwrap();
        c.b.iter_mut().for_each(|b| *b = -*b);
        let r2 = type2_sum_with(&p, 10_000, 100.0, &poly, 4, &c, &opts).unwrap();
        let (a, b) = (r1.value.unwrap(), r2.value.unwrap());
        assert_eq!((a.0, a.1), (-b.0, -b.1));
    }

    #[test]
    fn budget_is_enforced() {
        let p = ExponentParams::default();
        let opts = SumOptions { budget: 100, ..SumOptions::default() };
        assert!(matches!(type1_sum(&p, 100_000, 2.0, 2.0, &zero_poly(), 5, &opts), Err(Error::Budget { .. })));
    }
}
