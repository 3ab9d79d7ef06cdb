//! Sieve special functions: Buchstab's ω, the Mertens product and the
//! linear-sieve upper function `F`.

use std::sync::OnceLock;

use crate::arithmetic::primes_up_to;
use crate::{Error, Result};

#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
/// `e^γ`.
#[allow(clippy::excessive_precision)]
pub const EXP_GAMMA: f64 = 1.781_072_417_990_197_985_2;
/// `e^(−γ)`, the limit of ω(t).
#[allow(clippy::excessive_precision)]
pub const EXP_NEG_GAMMA: f64 = 0.561_459_483_566_885_169_82;

/// Beyond this point ω(t) agrees with `e^(−γ)` far below any useful tolerance
/// (the deviation decays like `1/Γ(t+1)`).
pub const OMEGA_TAIL_START: f64 = 40.0;

/// Tolerance of the shared table used by [`buchstab_omega`] and the integrals.
pub const DEFAULT_OMEGA_TOL: f64 = 1e-12;

/// Samples of ω on a uniform grid aligned with the integers, `t ∈ [1, t_max]`.
///
/// ω is smooth inside each `(k, k+1)` and only its derivatives jump at
/// integers, so both the integration that builds the table and the
/// interpolation that reads it use stencils confined to one unit segment.
#[derive(Debug, Clone)]
pub struct BuchstabTable {
    t_max: f64,
    /// Grid points per unit interval.
    per_unit: usize,
    values: Vec<f64>,
    tol: f64,
    error_estimate: f64,
}

impl BuchstabTable {
    /// Table on `[1, 40]` meeting `tol`, with `e^(−γ)` served beyond.
    pub fn new(tol: f64) -> Result<Self> {
        Self::with_range(OMEGA_TAIL_START, tol)
    }

    /// Builds a table on `[1, t_max]` and refines the grid until two
    /// successive resolutions agree to `tol` at every shared node.
    pub fn with_range(t_max: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        if !(t_max >= 2.0 && t_max.is_finite()) {
            return Err(Error::Domain(format!("t_max must be >= 2, got {t_max}")));
        }
        let units = t_max.ceil() as usize - 1;
        let mut m = 64usize;
        let mut coarse = solve(units, m);
        loop {
            let fine = solve(units, 2 * m);
            let diff = coarse.iter().enumerate().map(|(i, c)| (c - fine[2 * i]).abs()).fold(0.0f64, f64::max);
            // The coarse/fine gap of a fourth-order scheme overstates the
            // fine error by ~15; keep the full gap as a conservative bound.
            if diff <= tol {
                return Ok(Self {
                    t_max: (units + 1) as f64,
                    per_unit: 2 * m,
                    values: fine,
                    tol,
                    error_estimate: diff,
                });
            }
            if m >= 1 << 15 {
                return Err(Error::Precision(format!("Buchstab table stalled at {diff:.3e} > {tol:.3e}")));
            }
            m *= 2;
            coarse = fine;
        }
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        1.0 / self.per_unit as f64
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Refinement difference observed at construction; never exceeds `tol`.
    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid `(t, ω(t))` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = self.step();
        self.values.iter().enumerate().map(move |(i, &v)| (1.0 + i as f64 * h, v))
    }

    /// ω(t) for `t ≥ 1`.
    pub fn omega(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!("omega needs t >= 1, got {t}")));
        }
        Ok(self.eval(t))
    }

    /// ω(t) without the domain check; `t < 1` is clamped to 1. For hot loops
    /// whose callers have already validated the argument.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 2.0 {
            return 1.0 / t.max(1.0);
        }
        if t > self.t_max {
            return EXP_NEG_GAMMA;
        }
        let m = self.per_unit;
        let x = (t - 1.0) * m as f64;
        let seg = ((t.floor() as usize).min(self.t_max as usize - 1)) - 1;
        let seg_start = seg * m;
        // 4-point stencil inside [seg_start, seg_start + m].
        let i = (x.floor() as usize).clamp(seg_start + 1, seg_start + m - 2) - 1;
        let u = x - i as f64;
        let f = &self.values[i..i + 4];
        lagrange4(f, u)
    }
}

/// Cubic through `f[0..4]` at nodes `0, 1, 2, 3`, evaluated at `u`.
fn lagrange4(f: &[f64], u: f64) -> f64 {
    let (u0, u1, u2, u3) = (u, u - 1.0, u - 2.0, u - 3.0);
    -f[0] * u1 * u2 * u3 / 6.0 + f[1] * u0 * u2 * u3 / 2.0 - f[2] * u0 * u1 * u3 / 2.0 + f[3] * u0 * u1 * u2 / 6.0
}

/// Solves the delay equation on `[1, units + 1]` with `m` nodes per unit.
///
/// `t ω(t) = k ω(k) + ∫_k^t ω(u − 1) du` on `[k, k+1]`; the integral over one
/// grid cell uses the cubic through four nodes of the previous segment.
fn solve(units: usize, m: usize) -> Vec<f64> {
    let h = 1.0 / m as f64;
    let n = units * m + 1;
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate().take(m + 1) {
        *wi = 1.0 / (1.0 + i as f64 * h);
    }
    for seg in 1..units {
        let prev = (seg - 1) * m;
        let start = seg * m;
        let k = (seg + 1) as f64;
        let mut acc = k * w[start];
        for j in 0..m {
            let f = |o: usize| w[prev + o];
            let cell = if j == 0 {
                9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3)
            } else if j == m - 1 {
                f(m - 3) - 5.0 * f(m - 2) + 19.0 * f(m - 1) + 9.0 * f(m)
            } else {
                -f(j - 1) + 13.0 * f(j) + 13.0 * f(j + 1) - f(j + 2)
            };
            acc += h * cell / 24.0;
            let t = k + (j + 1) as f64 * h;
            w[start + j + 1] = acc / t;
        }
    }
    w
}

fn shared_table() -> &'static BuchstabTable {
    static TABLE: OnceLock<BuchstabTable> = OnceLock::new();
    TABLE.get_or_init(|| BuchstabTable::new(DEFAULT_OMEGA_TOL).expect("default table builds"))
}

/// ω(t) to absolute accuracy `tol`.
///
/// Requests at or above [`DEFAULT_OMEGA_TOL`] are served from a shared table;
/// tighter requests build a dedicated one.
pub fn buchstab_omega(t: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("omega needs t >= 1, got {t}")));
    }
    if tol >= DEFAULT_OMEGA_TOL {
        shared_table().omega(t)
    } else {
        BuchstabTable::with_range(t.clamp(2.0, OMEGA_TAIL_START), tol)?.omega(t)
    }
}

/// `Π_{p<z} (1 − 1/p)`; the empty product `1` for `z ≤ 2`.
pub fn mertens_product(z: f64) -> f64 {
    if !(z > 2.0) {
        return 1.0;
    }
    let limit = z.ceil() as u64;
    primes_up_to(limit).into_iter().take_while(|&p| (p as f64) < z).fold(1.0, |acc, p| acc * (1.0 - 1.0 / p as f64))
}

/// The linear-sieve upper function on `1 ≤ s ≤ 3`, where `F(s) = 2e^γ/s`.
pub fn linear_sieve_f(s: f64) -> Result<f64> {
    if !(1.0..=3.0).contains(&s) {
        return Err(Error::Domain(format!("linear sieve F is implemented on [1, 3], got {s}")));
    }
    Ok(2.0 * EXP_GAMMA / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((buchstab_omega(1.5, 1e-9).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let w = buchstab_omega(2.5, 1e-9).unwrap();
        assert!((w - (1.0 + 1.5f64.ln()) / 2.5).abs() < 1e-11);
        assert!((w - 0.562_186_0).abs() < 1e-7);
    }

    #[test]
    fn limit_value() {
        let w = buchstab_omega(7.0, 1e-9).unwrap();
        assert!((0.561_459_46..=0.561_459_51).contains(&w), "{w}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(buchstab_omega(0.5, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(linear_sieve_f(3.5), Err(Error::Domain(_))));
    }

    #[test]
    fn mertens_small() {
        assert_eq!(mertens_product(2.0), 1.0);
        assert_eq!(mertens_product(3.0), 0.5);
        assert!((mertens_product(10.0) - 8.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn sieve_f_values() {
        assert!((linear_sieve_f(2.0).unwrap() - 1.781_072_4).abs() < 1e-7);
        assert!((linear_sieve_f(3.0).unwrap() - 1.187_381_6).abs() < 1e-7);
    }

    #[test]
    fn tighter_tolerance_builds_private_table() {
        let w = buchstab_omega(3.5, 1e-13).unwrap();
        let v = buchstab_omega(3.5, 1e-9).unwrap();
        assert!((w - v).abs() < 1e-11);
    }
}
