//! Exponent algebra: every size in the argument is a power of `N`, and the
//! argument is carried by linear inequalities among those powers. This module
//! keeps all of them as exact rationals in σ = ρ − 1/6.

mod ledger;
mod report;
mod subproduct;

use std::fmt;

use num_traits::Signed;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::exact::{q, qi, to_f64, Q};
use crate::{Error, Result};

pub use ledger::{sieve_level_claims, verify_ledger};
pub use report::{format_reports, ConstraintReport, Relation};
pub use subproduct::find_subproduct;

/// Bounds of the admissible σ window, `1/120 < σ ≤ 1/102`.
pub fn sigma_window() -> (Q, Q) {
    (q(1, 120), q(1, 102))
}

/// The working exponent choice ρ = 37/210, i.e. σ = 1/105.
pub fn default_rho() -> Q {
    q(37, 210)
}

/// A subinterval of `[0, 1/2]` with exact endpoints and explicit closedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentInterval {
    pub name: &'static str,
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl ExponentInterval {
    fn new(name: &'static str, lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Self {
        Self { name, lo, hi, lo_closed, hi_closed }
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn bounds_f64(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl fmt::Display for ExponentInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}{}, {}{}",
            self.name,
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// All exponents derived from ρ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentParams {
    pub rho: Q,
    pub sigma: Q,
    /// `b = 1/6 − 5σ`; the small sifting level is `z = (2N)^b`.
    pub b: Q,
    /// `f = 1/3 − 4σ`; upper end of the Type II range.
    pub f: Q,
    /// `I2 … I7` in order.
    pub intervals: [ExponentInterval; 6],
}

impl ExponentParams {
    /// Builds the parameter set for `rho`, rejecting σ outside `(1/120, 1/102]`.
    pub fn derive(rho: Q) -> Result<Self> {
        let sigma = &rho - q(1, 6);
        let (lo, hi) = sigma_window();
        if sigma <= lo || sigma > hi {
            return Err(Error::OutOfRange { sigma: sigma.to_string() });
        }
        Ok(Self::build(rho, sigma))
    }

    pub fn from_sigma(sigma: Q) -> Result<Self> {
        Self::derive(sigma + q(1, 6))
    }

    /// Sensitivity variant: ρ is perturbed to `rho + epsilon` before the range
    /// check, mirroring a run with a small positive ε.
    pub fn derive_with_epsilon(rho: Q, epsilon: Q) -> Result<Self> {
        if epsilon.is_negative() {
            return Err(Error::Domain(format!("epsilon must be >= 0, got {epsilon}")));
        }
        Self::derive(rho + epsilon)
    }

    /// Builds parameters without the σ range check. Intended for failure-mode
    /// exploration (for example σ = 1/50), never for the main verification.
    pub fn from_sigma_unchecked(sigma: Q) -> Self {
        Self::build(&sigma + q(1, 6), sigma)
    }

    fn build(rho: Q, sigma: Q) -> Self {
        let s = &sigma;
        let b = q(1, 6) - qi(5) * s;
        let f = q(1, 3) - qi(4) * s;
        let rho_hi = &rho; // 1/6 + σ
        let i4_hi = q(1, 3) + qi(8) * s;
        let i5_hi = q(1, 2) - qi(9) * s;
        let i6_hi = q(3, 8) + q(33, 4) * s;
        let intervals = [
            ExponentInterval::new("I2", b.clone(), rho_hi.clone(), true, false),
            ExponentInterval::new("I3", rho_hi.clone(), f.clone(), false, false),
            ExponentInterval::new("I4", f.clone(), i4_hi.clone(), true, false),
            ExponentInterval::new("I5", i4_hi, i5_hi.clone(), true, false),
            ExponentInterval::new("I6", i5_hi, i6_hi.clone(), true, false),
            ExponentInterval::new("I7", i6_hi, q(1, 2), true, true),
        ];
        Self { rho, sigma, b, f, intervals }
    }

    /// `I_k` for `k ∈ 2..=7`.
    pub fn interval(&self, k: usize) -> &ExponentInterval {
        assert!((2..=7).contains(&k), "interval index {k} not in 2..=7");
        &self.intervals[k - 2]
    }

    /// Exponent of the linear-sieve level `Z = N^(1/12 + σ/2) = N^(ρ/2)`.
    pub fn big_z(&self) -> Q {
        q(1, 12) + &self.sigma / qi(2)
    }

    /// The three Type I right-hand sides in σ-form:
    /// `3/2 − 3σ`, `7/4 − 15σ/2`, `2/3 − 8σ`.
    pub fn type1_bounds(&self) -> [Q; 3] {
        let s = &self.sigma;
        [q(3, 2) - qi(3) * s, q(7, 4) - q(15, 2) * s, q(2, 3) - qi(8) * s]
    }

    /// The same bounds in ρ-form: `2 − 3ρ`, `3 − 15ρ/2`, `2 − 8ρ`.
    pub fn type1_bounds_rho_form(&self) -> [Q; 3] {
        let r = &self.rho;
        [qi(2) - qi(3) * r, qi(3) - q(15, 2) * r, qi(2) - qi(8) * r]
    }

    pub fn as_f64(&self) -> ParamsF64 {
        ParamsF64 { rho: to_f64(&self.rho), sigma: to_f64(&self.sigma), b: to_f64(&self.b), f: to_f64(&self.f) }
    }
}

impl Default for ExponentParams {
    fn default() -> Self {
        Self::derive(default_rho()).expect("default rho is admissible")
    }
}

impl Serialize for ExponentParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Iv<'a> {
            name: &'a str,
            lo: String,
            hi: String,
            lo_value: f64,
            hi_value: f64,
            lo_closed: bool,
            hi_closed: bool,
        }
        let ivs: Vec<Iv> = self
            .intervals
            .iter()
            .map(|i| Iv {
                name: i.name,
                lo: i.lo.to_string(),
                hi: i.hi.to_string(),
                lo_value: to_f64(&i.lo),
                hi_value: to_f64(&i.hi),
                lo_closed: i.lo_closed,
                hi_closed: i.hi_closed,
            })
            .collect();
        let mut st = serializer.serialize_struct("ExponentParams", 9)?;
        st.serialize_field("rho", &self.rho.to_string())?;
        st.serialize_field("rho_value", &to_f64(&self.rho))?;
        st.serialize_field("sigma", &self.sigma.to_string())?;
        st.serialize_field("sigma_value", &to_f64(&self.sigma))?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("b_value", &to_f64(&self.b))?;
        st.serialize_field("f", &self.f.to_string())?;
        st.serialize_field("f_value", &to_f64(&self.f))?;
        st.serialize_field("intervals", &ivs)?;
        st.end()
    }
}

impl fmt::Display for ExponentParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |f: &mut fmt::Formatter<'_>, name: &str, v: &Q| {
            writeln!(f, "{name:<6} {:<14} {:.10}", v.to_string(), to_f64(v))
        };
        row(f, "rho", &self.rho)?;
        row(f, "sigma", &self.sigma)?;
        row(f, "b", &self.b)?;
        row(f, "f", &self.f)?;
        for iv in &self.intervals {
            let (lo, hi) = iv.bounds_f64();
            writeln!(f, "{iv:<32} ~ [{lo:.7}, {hi:.7}]")?;
        }
        Ok(())
    }
}

/// Floating-point view of the parameters for the quadrature code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsF64 {
    pub rho: f64,
    pub sigma: f64,
    pub b: f64,
    pub f: f64,
}

/// Type I (bilinear with one smooth variable) hypotheses for `V = N^v`,
/// `W = N^w`: `3v + 2w ≤ 2 − 3ρ`, `v + 3w ≤ 3 − 15ρ/2`, `v + w ≤ 2 − 8ρ`.
pub fn check_type1_hypotheses(v: &Q, w: &Q, p: &ExponentParams) -> Vec<ConstraintReport> {
    let [c1, c2, c3] = p.type1_bounds_rho_form();
    vec![
        ConstraintReport::new("type1.cubic", "V^3 W^2 << N^(2-3rho)", Relation::Ll, qi(3) * v + qi(2) * w, c1),
        ConstraintReport::new("type1.linear-cubic", "V W^3 << N^(3-15rho/2)", Relation::Ll, v + qi(3) * w, c2),
        ConstraintReport::new("type1.product", "V W << N^(2-8rho)", Relation::Ll, v + w, c3),
    ]
}

/// Type II (bilinear) hypotheses for `Y = N^y`: `ρ ≤ y ≤ 1 − 4ρ` and
/// `1/6 < ρ < 1/5`.
pub fn check_type2_hypotheses(y: &Q, p: &ExponentParams) -> Vec<ConstraintReport> {
    let r = &p.rho;
    vec![
        ConstraintReport::new("type2.lower", "N^rho << Y", Relation::Ll, r.clone(), y.clone()),
        ConstraintReport::new("type2.upper", "Y << N^(1-4rho)", Relation::Ll, y.clone(), qi(1) - qi(4) * r),
        ConstraintReport::new("type2.rho-lower", "1/6 < rho", Relation::Lt, q(1, 6), r.clone()),
        ConstraintReport::new("type2.rho-upper", "rho < 1/5", Relation::Lt, r.clone(), q(1, 5)),
    ]
}

/// Conditions on the length `T = (2N)^ν` of the extra smooth variable in the
/// bilinear comparison.
pub fn check_extra_variable(nu: &Q, p: &ExponentParams) -> Vec<ConstraintReport> {
    let r = &p.rho;
    let [c1, c2, c3] = p.type1_bounds();
    vec![
        ConstraintReport::new(
            "extra-variable.cubic",
            "3rho + 2nu <= 3/2 - 3s",
            Relation::Le,
            qi(3) * r + qi(2) * nu,
            c1,
        ),
        ConstraintReport::new(
            "extra-variable.linear-cubic",
            "rho + 3nu <= 7/4 - 15s/2",
            Relation::Le,
            r + qi(3) * nu,
            c2,
        ),
        ConstraintReport::new("extra-variable.product", "rho + nu <= 2/3 - 8s", Relation::Le, r + nu, c3),
    ]
}

/// Overall verdict for a batch of reports.
pub fn all_satisfied(reports: &[ConstraintReport]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn working_parameters() {
        let p = ExponentParams::derive(q(37, 210)).unwrap();
        assert_eq!(p.sigma, q(1, 105));
        assert_eq!(p.b, q(5, 42));
        assert_eq!(p.f, q(31, 105));
        assert_eq!(p.big_z(), &p.rho / qi(2));
    }

    #[test]
    fn window_edges() {
        assert!(ExponentParams::from_sigma(q(1, 102)).is_ok());
        assert!(matches!(ExponentParams::derive(q(1, 6)), Err(Error::OutOfRange { .. })));
        assert!(ExponentParams::from_sigma(q(1, 120)).is_err());
        assert!(ExponentParams::from_sigma(q(1, 101)).is_err());
    }

    #[test]
    fn intervals_tile_b_to_half() {
        let p = ExponentParams::default();
        assert_eq!(p.interval(2).lo, p.b);
        assert_eq!(p.interval(7).hi, q(1, 2));
        for k in 2..7 {
            assert_eq!(p.interval(k).hi, p.interval(k + 1).lo);
        }
        // ρ itself sits in the gap between I2 and I3.
        assert!(!p.interval(2).contains(&p.rho));
        assert!(!p.interval(3).contains(&p.rho));
    }

    #[test]
    fn type1_example() {
        let p = ExponentParams::default();
        let g = q(9, 20);
        let v = q(2, 3) - qi(8) * &p.sigma - &g;
        let r = check_type1_hypotheses(&v, &g, &p);
        assert_eq!(r[0].lhs, qi(2) - qi(24) * &p.sigma - &g);
        assert!((to_f64(&r[0].lhs) - 1.32143).abs() < 1e-5);
        assert!((to_f64(&r[0].rhs) - 1.47143).abs() < 1e-5);
        assert!(all_satisfied(&r));
        let gross = check_type1_hypotheses(&qi(1), &qi(1), &p);
        assert!(!gross[2].satisfied);
    }

    #[test]
    fn type2_example() {
        let p = ExponentParams::default();
        let r = check_type2_hypotheses(&q(3, 10), &p);
        assert!(r[0].satisfied);
        assert!(!r[1].satisfied);
        assert_eq!(r[1].slack, q(31, 105) - q(3, 10));
        let at_rho = check_type2_hypotheses(&p.rho.clone(), &p);
        assert!(all_satisfied(&at_rho));
        assert_eq!(at_rho[0].slack, qi(0));
    }

    #[test]
    fn extra_variable_example() {
        let p = ExponentParams::default();
        let r = check_extra_variable(&qi(0), &p);
        assert!(all_satisfied(&r));
        assert!((to_f64(&r[0].lhs) - 0.528571).abs() < 1e-6);
        let tight = q(2, 3) - qi(8) * &p.sigma - &p.rho;
        let r = check_extra_variable(&tight, &p);
        assert_eq!(r[2].slack, qi(0));
        assert!(r[2].satisfied);
        assert!(!check_extra_variable(&qi(1), &p)[2].satisfied);
    }
}
