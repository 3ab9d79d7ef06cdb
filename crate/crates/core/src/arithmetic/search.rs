use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::convergents::{best_convergent, Convergent};
use super::primes::primes_up_to;
use super::real::{fractional_distance, fractional_distance_exact, pow10, ratio_f64, Real};
use crate::exact::{to_f64, Q};
use crate::exponents::ExponentParams;
use crate::{Error, Result};

/// Relative band around a threshold inside which the float comparison is
/// replaced by an exact one.
const LOG_GUARD: f64 = 1e-9;

/// Which detection rule the search applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Primes `p ≤ N_max` with `‖αp² + βp + γ‖ < p^(−ρ)`.
    PowerThreshold,
    /// The sieved set: `n ∈ (N/2, N]` with `‖g(n)‖ < δ`, where `g` replaces
    /// `α` by its convergent `a/q` with `q ≤ L1^(1/2) N` and `δ = 1/L1`.
    SetA,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub alpha: Real,
    pub beta: Real,
    pub gamma: Real,
    pub rho: Q,
    pub n_max: u64,
    pub epsilon: Q,
    pub mode: SearchMode,
}

impl SearchConfig {
    /// Digits of `alpha` recommended for a search up to `n_max`.
    pub fn recommended_digits(n_max: u64) -> u32 {
        let nn = (n_max as f64) * (n_max as f64);
        2 * (nn.log10().floor() as u32 + 1) + 10
    }

    /// `α = √2`-style configuration with `β = γ = 0`.
    pub fn new(alpha: Real, rho: Q, n_max: u64) -> Self {
        Self {
            alpha,
            beta: Real::zero(),
            gamma: Real::zero(),
            rho,
            n_max,
            epsilon: Q::new(1.into(), 1000.into()),
            mode: SearchMode::PowerThreshold,
        }
    }

    fn n(&self) -> f64 {
        self.n_max as f64
    }

    /// `L1 = 2 N^(ρ − ε/2)`.
    pub fn l1(&self) -> f64 {
        2.0 * self.n().powf(to_f64(&self.rho) - to_f64(&self.epsilon) / 2.0)
    }

    /// `δ = 1/L1`.
    pub fn delta(&self) -> f64 {
        1.0 / self.l1()
    }

    /// `L = N^(ρ − ε/3)`.
    pub fn big_l(&self) -> f64 {
        self.n().powf(to_f64(&self.rho) - to_f64(&self.epsilon) / 3.0)
    }

    fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::Domain("n_max must be at least 2".into()));
        }
        if self.rho.is_negative() || self.epsilon.is_negative() {
            return Err(Error::Domain("rho and epsilon must be nonnegative".into()));
        }
        if self.mode == SearchMode::SetA {
            ExponentParams::derive(self.rho.clone())?;
            if !self.epsilon.is_positive() {
                return Err(Error::Domain("set-A mode needs epsilon > 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub p: u64,
    /// `‖f(p)‖ ∈ [0, 1/2]`.
    pub value: f64,
    pub threshold: f64,
}

/// Counts for the sieved-set mode, reported without any asserted relation.
#[derive(Debug, Clone, Serialize)]
pub struct SetAStats {
    pub n: u64,
    pub convergent: Convergent,
    pub l1: f64,
    pub delta: f64,
    pub big_l: f64,
    /// `|𝒜|` over all integers of `(N/2, N]`.
    pub members: u64,
    /// `|𝒜|` against the heuristic `2δ · |(N/2, N]|`.
    pub members_ratio: f64,
    pub prime_members: u64,
    /// Prime members against `2δ · π`-count of `(N/2, N]`.
    pub prime_ratio: f64,
    /// Power-threshold hits that fall in `(N/2, N]`.
    pub power_threshold_hits: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub hits: Vec<SearchHit>,
    pub primes_tested: u64,
    pub set_a: Option<SetAStats>,
}

/// Fixed-point evaluator for `αx² + βx + γ mod 1`.
struct QuadraticPhase {
    scale: u32,
    a: BigInt,
    b: BigInt,
    c: BigInt,
    one: BigInt,
    /// Error bound in units of `10^(−scale)`: `(ea x² + eb x + ec)`.
    ea: BigInt,
    eb: BigInt,
    ec: BigInt,
}

impl QuadraticPhase {
    fn new(alpha: &Real, beta: &Real, gamma: &Real) -> Self {
        let scale = alpha.scale().max(beta.scale()).max(gamma.scale());
        let err = |r: &Real| if r.is_exact() { BigInt::zero() } else { pow10(scale - r.scale()) };
        Self {
            scale,
            a: alpha.num_at(scale),
            b: beta.num_at(scale),
            c: gamma.num_at(scale),
            one: pow10(scale),
            ea: err(alpha),
            eb: err(beta),
            ec: err(gamma),
        }
    }

    /// `(distance numerator, error numerator)` over `10^scale`.
    fn distance(&self, x: u64) -> (BigInt, BigInt) {
        let xb = BigInt::from(x);
        let v = &self.a * &xb * &xb + &self.b * &xb + &self.c;
        let d = fractional_distance_exact(&v, &self.one);
        let x2 = (x as u128) * (x as u128);
        let e = &self.ea * BigInt::from(x2) + &self.eb * &xb + &self.ec;
        (d, e)
    }
}

/// Decides `d / 10^s < p^(−ρ)` exactly: `d^den · p^num < 10^(s·den)`.
fn below_power_exact(d: &BigInt, scale: u32, p: u64, rho: &Q) -> bool {
    if d.is_zero() {
        return true;
    }
    let num = rho.numer().to_u32().expect("rho numerator fits u32");
    let den = rho.denom().to_u32().expect("rho denominator fits u32");
    let lhs = num_traits::pow(d.clone(), den as usize) * num_traits::pow(BigInt::from(p), num as usize);
    lhs < num_traits::pow(pow10(scale), den as usize)
}

/// `ln(d / 10^s)` for `d > 0`.
fn ln_ratio(d: &BigInt, scale: u32) -> f64 {
    let bits = d.bits();
    let shift = bits.saturating_sub(60);
    let top = (d >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2 - scale as f64 * std::f64::consts::LN_10
}

/// `Some(true/false)` when the whole enclosure lies on one side of the
/// threshold `p^(−ρ)`; `None` when it straddles it.
fn classify(phase: &QuadraticPhase, p: u64, rho: &Q, log_thr: f64) -> Option<bool> {
    let (d, e) = phase.distance(p);
    let lo = if d > e { &d - &e } else { BigInt::zero() };
    let hi = &d + &e;
    let side = |x: &BigInt| -> bool {
        if x.is_zero() {
            return true;
        }
        let gap = ln_ratio(x, phase.scale) - log_thr;
        if gap.abs() > LOG_GUARD * log_thr.abs().max(1.0) {
            gap < 0.0
        } else {
            below_power_exact(x, phase.scale, p, rho)
        }
    };
    let (a, b) = (side(&lo), side(&hi));
    (a == b).then_some(a)
}

/// Primes hitting the configured threshold, in increasing order.
pub fn search_solutions(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    match cfg.mode {
        SearchMode::PowerThreshold => {
            let primes = primes_up_to(cfg.n_max);
            let hits = power_threshold_hits(cfg, &primes)?;
            Ok(SearchOutcome { mode: cfg.mode, hits, primes_tested: primes.len() as u64, set_a: None })
        }
        SearchMode::SetA => set_a(cfg),
    }
}

fn power_threshold_hits(cfg: &SearchConfig, primes: &[u64]) -> Result<Vec<SearchHit>> {
    let phase = QuadraticPhase::new(&cfg.alpha, &cfg.beta, &cfg.gamma);
    let rho_f = to_f64(&cfg.rho);
    let chunks: Vec<Result<Vec<SearchHit>>> = primes
        .par_chunks(4096)
        .map(|block| {
            let mut out = Vec::new();
            for &p in block {
                let log_thr = -rho_f * (p as f64).ln();
                match classify(&phase, p, &cfg.rho, log_thr) {
                    Some(true) => {
                        let (d, _) = phase.distance(p);
                        out.push(SearchHit { p, value: ratio_f64(&d, &phase.one), threshold: log_thr.exp() });
                    }
                    Some(false) => {}
                    None => {
                        return Err(Error::Precision(format!(
                            "alpha digits cannot decide p = {p}; supply at least {} digits",
                            SearchConfig::recommended_digits(cfg.n_max)
                        )))
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut hits = Vec::new();
    for c in chunks {
        hits.extend(c?);
    }
    Ok(hits)
}

fn set_a(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let n = cfg.n_max;
    let l1 = cfg.l1();
    let delta = cfg.delta();
    let q_max = (l1.sqrt() * n as f64).floor() as u64;
    let conv = best_convergent(&cfg.alpha, q_max)?;
    let beta = cfg.beta.to_f64();
    let gamma = cfg.gamma.to_f64();
    let lo = n / 2 + 1;
    let q = conv.q as i128;
    let a = conv.a as i128;
    let g = |x: u64| -> f64 {
        let x = x as i128;
        let r = (a.rem_euclid(q) * ((x * x) % q)).rem_euclid(q);
        let lin = fractional_distance_signed(beta * x as f64 + gamma);
        fractional_distance(r as f64 / q as f64 + lin)
    };
    let in_a: Vec<(u64, f64)> = (lo..=n)
        .into_par_iter()
        .filter_map(|x| {
            let v = g(x);
            (v < delta).then_some((x, v))
        })
        .collect();
    let primes = primes_up_to(n);
    let upper: Vec<u64> = primes.iter().copied().filter(|&p| p >= lo).collect();
    let is_prime = |x: u64| upper.binary_search(&x).is_ok();
    let hits: Vec<SearchHit> =
        in_a.iter().filter(|(x, _)| is_prime(*x)).map(|&(p, value)| SearchHit { p, value, threshold: delta }).collect();
    let power = power_threshold_hits(cfg, &upper)?;
    let width = (n - lo + 1) as f64;
    let stats = SetAStats {
        n,
        convergent: conv,
        l1,
        delta,
        big_l: cfg.big_l(),
        members: in_a.len() as u64,
        members_ratio: in_a.len() as f64 / (2.0 * delta * width),
        prime_members: hits.len() as u64,
        prime_ratio: hits.len() as f64 / (2.0 * delta * upper.len().max(1) as f64),
        power_threshold_hits: power.len() as u64,
    };
    Ok(SearchOutcome { mode: cfg.mode, hits, primes_tested: upper.len() as u64, set_a: Some(stats) })
}

/// `x − round(x)`, in `[−1/2, 1/2]`.
fn fractional_distance_signed(x: f64) -> f64 {
    x - x.round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn cfg(n: u64, rho: Q) -> SearchConfig {
        SearchConfig::new(Real::sqrt(2, SearchConfig::recommended_digits(n)), rho, n)
    }

    #[test]
    fn p2_is_a_hit() {
        let out = search_solutions(&cfg(10, q(37, 210))).unwrap();
        let h = &out.hits[0];
        assert_eq!(h.p, 2);
        assert!((h.value - 0.343_15).abs() < 1e-5);
        assert!((h.threshold - 0.885_037).abs() < 1e-6);
    }

    #[test]
    fn rho_zero_hits_every_prime() {
        let out = search_solutions(&cfg(1000, q(0, 1))).unwrap();
        assert_eq!(out.hits.len(), 168);
    }

    #[test]
    fn short_alpha_is_rejected() {
        let mut c = cfg(100_000, q(37, 210));
        c.alpha = Real::parse("1.41421356", false).unwrap();
        assert!(matches!(search_solutions(&c), Err(Error::Precision(_))));
    }

    #[test]
    fn set_a_mode_reports() {
        let mut c = cfg(20_000, q(37, 210));
        c.mode = SearchMode::SetA;
        let out = search_solutions(&c).unwrap();
        let s = out.set_a.unwrap();
        assert!(s.members > 0);
        assert!(out.hits.iter().all(|h| h.value < s.delta && h.p > 10_000));
    }
}
