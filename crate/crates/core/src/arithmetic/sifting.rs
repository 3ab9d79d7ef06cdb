use serde::Serialize;

use super::primes::{lpf_table, primes_up_to};
use crate::exact::{ceil_pow, floor_pow, Q};
use crate::exponents::{ExponentInterval, ExponentParams};
use crate::{Error, Result};

/// Largest `N` accepted by [`decomposition_check`].
pub const DECOMPOSITION_MAX_N: u64 = 1_000_000;

/// Sorted, deduplicated copy of a finite set of positive integers.
fn normalize(e: &[u64]) -> Vec<u64> {
    let mut v = e.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Least prime factor lookup with `lpf(1) = ∞`.
struct Lpf {
    table: Vec<u32>,
}

impl Lpf {
    fn new(max: u64) -> Self {
        Self { table: lpf_table(max as usize) }
    }

    fn get(&self, m: u64) -> u64 {
        if m == 1 {
            u64::MAX
        } else {
            self.table[m as usize] as u64
        }
    }

    /// Distinct prime factors of `m`, increasing.
    fn distinct_factors(&self, mut m: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while m > 1 {
            let p = self.table[m as usize] as u64;
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        out
    }

    /// `(m, P(w)) = 1` with `P(w) = Π_{p<w} p`.
    fn coprime_below(&self, m: u64, w: u64) -> bool {
        if m == 0 {
            return w <= 2;
        }
        self.get(m) >= w
    }
}

/// `S(E, w) = #{m ∈ E : (m, P(w)) = 1}`.
pub fn sift_count(e: &[u64], w: u64) -> u64 {
    let e = normalize(e);
    let Some(&max) = e.last() else { return 0 };
    let lpf = Lpf::new(max.max(1));
    e.iter().filter(|&&m| lpf.coprime_below(m, w)).count() as u64
}

/// `E_d = {m : dm ∈ E}`.
pub fn multiples_quotient(e: &[u64], d: u64) -> Vec<u64> {
    e.iter().filter(|&&m| m % d == 0).map(|&m| m / d).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BuchstabTerm {
    pub p: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuchstabReport {
    pub z1: u64,
    pub z2: u64,
    pub lhs: u64,
    pub s_z2: u64,
    pub terms: Vec<BuchstabTerm>,
    pub rhs: i64,
    pub holds: bool,
}

/// Checks `S(E, z1) = S(E, z2) − Σ_{z2 ≤ p < z1} S(E_p, p)` by computing
/// both sides separately.
pub fn buchstab_identity_check(e: &[u64], z1: u64, z2: u64) -> Result<BuchstabReport> {
    if !(2 <= z2 && z2 <= z1) {
        return Err(Error::Domain(format!("need 2 <= z2 <= z1, got z2 = {z2}, z1 = {z1}")));
    }
    let e = normalize(e);
    let lhs = sift_count(&e, z1);
    let s_z2 = sift_count(&e, z2);
    let terms: Vec<BuchstabTerm> = primes_up_to(z1.saturating_sub(1))
        .into_iter()
        .filter(|&p| p >= z2)
        .map(|p| BuchstabTerm { p, count: sift_count(&multiples_quotient(&e, p), p) })
        .collect();
    let rhs = s_z2 as i64 - terms.iter().map(|t| t.count as i64).sum::<i64>();
    Ok(BuchstabReport { z1, z2, lhs, s_z2, terms, rhs, holds: lhs as i64 == rhs })
}

/// Integer form of an exponent range: primes `p` with `min ≤ p ≤ max`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrimeRange {
    pub min: u64,
    pub max: u64,
}

impl PrimeRange {
    fn contains(&self, p: u64) -> bool {
        self.min <= p && p <= self.max
    }

    /// Exact translation of `base^lo ⋚ p ⋚ base^hi`.
    fn from_exponents(base: u64, lo: &Q, lo_closed: bool, hi: &Q, hi_closed: bool) -> Self {
        let min = if lo_closed { ceil_pow(base, lo) } else { floor_pow(base, lo) + 1 };
        let max = if hi_closed { floor_pow(base, hi) } else { ceil_pow(base, hi).saturating_sub(1) };
        Self { min, max }
    }

    fn from_interval(base: u64, i: &ExponentInterval) -> Self {
        Self::from_exponents(base, &i.lo, i.lo_closed, &i.hi, i.hi_closed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub display: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub n: u64,
    pub set_size: u64,
    /// Sifting threshold `z = (2N)^b` as an integer: primes `p < z_int` are sifted.
    pub z_int: u64,
    /// `Z = N^(1/12 + σ/2)` in the same form.
    pub big_z_int: u64,
    /// `I2 … I7` as integer prime ranges.
    pub ranges: Vec<(String, PrimeRange)>,
    /// `S0 … S18`.
    pub s: Vec<i64>,
    pub identities: Vec<IdentityCheck>,
}

impl DecompositionReport {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }
}

/// Evaluates the sums `S0 … S18` of the final decomposition on a test set `E`
/// (default `(N/2, N]`) and checks each displayed identity exactly.
///
/// Each `S(E_d, w)` is counted as `#{n ∈ E : d | n, (n/d, P(w)) = 1}`, so
/// every sum is an enumeration over `E` and its prime tuples. Prime
/// orderings are strict, which is what makes the identities exact.
pub fn decomposition_check(n: u64, params: &ExponentParams, e: Option<&[u64]>) -> Result<DecompositionReport> {
    if n < 4 {
        return Err(Error::Domain(format!("N must be at least 4, got {n}")));
    }
    if n > DECOMPOSITION_MAX_N {
        return Err(Error::Budget { needed: n, cap: DECOMPOSITION_MAX_N });
    }
    let set = match e {
        Some(e) => normalize(e),
        None => (n / 2 + 1..=n).collect(),
    };
    if set.first() == Some(&0) || set.last().is_some_and(|&m| m > n) {
        return Err(Error::Domain("test set must lie in [1, N]".into()));
    }
    let two_n = 2 * n;
    let lpf = Lpf::new(n);
    let z = ceil_pow(two_n, &params.b);
    let root = ceil_pow(two_n, &Q::new(1.into(), 2.into()));
    let big_z = ceil_pow(n, &params.big_z());
    let ranges: Vec<PrimeRange> = params.intervals.iter().map(|i| PrimeRange::from_interval(two_n, i)).collect();
    let (i2, i4, i6, i7) = (ranges[0], ranges[2], ranges[4], ranges[5]);
    let half_f = &params.f / Q::from_integer(2.into());
    let f_half = ceil_pow(two_n, &half_f);

    let mut s = [0i64; 19];
    for &m in &set {
        let c = |x: u64, w: u64| i64::from(lpf.get(x) >= w);
        s[0] += c(m, root);
        s[1] += c(m, z);
        let ps = lpf.distinct_factors(m);
        for (j, &p1) in ps.iter().enumerate() {
            let r1 = m / p1;
            for (k, range) in ranges.iter().enumerate() {
                if range.contains(p1) {
                    s[k + 2] += c(r1, p1);
                }
            }
            let smaller = &ps[..j];
            if i2.contains(p1) {
                s[8] += c(r1, z);
                for (k, &p2) in smaller.iter().enumerate() {
                    if !i2.contains(p2) {
                        continue;
                    }
                    let r2 = r1 / p2;
                    s[9] += c(r2, z);
                    for (l, &p3) in smaller[..k].iter().enumerate() {
                        if !i2.contains(p3) {
                            continue;
                        }
                        let r3 = r2 / p3;
                        s[10] += c(r3, z);
                        for &p4 in &smaller[..l] {
                            if i2.contains(p4) {
                                s[11] += c(r3 / p4, p4);
                            }
                        }
                    }
                }
            }
            if i4.contains(p1) {
                s[12] += c(r1, z);
                for (k, &p2) in smaller.iter().enumerate() {
                    let r2 = r1 / p2;
                    if p2 >= f_half {
                        s[13] += c(r2, p2);
                    } else if p2 >= z {
                        s[14] += c(r2, z);
                        for &p3 in &smaller[..k] {
                            if p3 >= z {
                                s[15] += c(r2 / p3, p3);
                            }
                        }
                    }
                }
            }
            if i7.contains(p1) {
                s[16] += c(r1, z);
                for &p2 in smaller.iter().filter(|&&p2| p2 >= z) {
                    s[17] += c(r1 / p2, p2);
                }
            }
            if i6.contains(p1) {
                for &p2 in lpf.distinct_factors(r1).iter().filter(|&&p2| p2 >= big_z && p2 < p1) {
                    s[18] += c(r1 / p2, p2);
                }
            }
        }
    }
    // Σ_{p1 ∈ I6} S(E_{p1}, Z), counted separately.
    let s6_z: i64 = set
        .iter()
        .map(|&m| {
            lpf.distinct_factors(m).into_iter().filter(|&p1| i6.contains(p1) && lpf.get(m / p1) >= big_z).count() as i64
        })
        .sum();

    let check = |name, display, lhs: i64, rhs: i64| IdentityCheck { name, display, lhs, rhs, holds: lhs == rhs };
    let identities = vec![
        check("top-level", "S0 = S1 - (S2 + ... + S7)", s[0], s[1] - s[2..=7].iter().sum::<i64>()),
        check("small-prime", "S2 = S8 - S9 + S10 - S11", s[2], s[8] - s[9] + s[10] - s[11]),
        check("fourth-range", "S4 = S12 - S13 - S14 + S15", s[4], s[12] - s[13] - s[14] + s[15]),
        check("top-range", "S7 = S16 - S17", s[7], s[16] - s[17]),
        check("sixth-range", "S6 + S18 = sum over I6 of S(E_p1, Z)", s[6] + s[18], s6_z),
    ];
    Ok(DecompositionReport {
        n,
        set_size: set.len() as u64,
        z_int: z,
        big_z_int: big_z,
        ranges: params.intervals.iter().zip(&ranges).map(|(i, r)| (i.name.to_string(), *r)).collect(),
        s: s.to_vec(),
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sift_examples() {
        let e: Vec<u64> = (1..=10).collect();
        assert_eq!(sift_count(&e, 3), 5);
        assert_eq!(sift_count(&e, 2), 10);
        assert_eq!(sift_count(&[], 7), 0);
    }

    #[test]
    fn buchstab_termwise() {
        let e: Vec<u64> = (1..=30).collect();
        let r = buchstab_identity_check(&e, 6, 2).unwrap();
        assert_eq!(r.lhs, 8);
        assert_eq!(r.s_z2, 30);
        let counts: Vec<_> = r.terms.iter().map(|t| (t.p, t.count)).collect();
        assert_eq!(counts, vec![(2, 15), (3, 5), (5, 2)]);
        assert!(r.holds);
        assert!(buchstab_identity_check(&e, 7, 7).unwrap().terms.is_empty());
    }

    #[test]
    fn decomposition_default_set() {
        let p = ExponentParams::default();
        let r = decomposition_check(1000, &p, None).unwrap();
        assert!(r.all_hold(), "{:?}", r.identities);
        assert_eq!(r.set_size, 500);
    }

    #[test]
    fn decomposition_empty_set() {
        let p = ExponentParams::default();
        let r = decomposition_check(1000, &p, Some(&[])).unwrap();
        assert!(r.identities.iter().all(|c| c.lhs == 0 && c.rhs == 0));
    }

    #[test]
    fn decomposition_larger() {
        let p = ExponentParams::default();
        let r = decomposition_check(1_000_000, &p, None).unwrap();
        assert!(r.all_hold(), "{:?}", r.identities);
        // The small-prime branch is exercised at this size.
        assert!(r.s[8] > 0 && r.s[9] > 0);
    }
}
