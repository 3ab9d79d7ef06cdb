use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::budget::check_budget;
use crate::Result;

/// Counts `R(n) = #{(ℓ1, ℓ2, y1, y2) : ℓ1 y1² − ℓ2 y2² = n}` with
/// `ℓ ∈ [1, L]` and `y ∈ (Y, 2Y]`.
#[derive(Debug, Clone, Serialize)]
pub struct RepresentationSpectrum {
    pub l: u64,
    pub y: u64,
    pub y_count: u64,
    pub counts: BTreeMap<i64, u64>,
    pub moment1: u128,
    pub moment2: u128,
}

impl RepresentationSpectrum {
    pub fn r(&self, n: i64) -> u64 {
        self.counts.get(&n).copied().unwrap_or(0)
    }

    pub fn max_r(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

/// Multiset of the values `ℓy²` as `(value, multiplicity)`, increasing.
fn value_multiset(l: u64, y: u64) -> Vec<(i64, u64)> {
    let mut m: BTreeMap<i64, u64> = BTreeMap::new();
    for ell in 1..=l {
        for yy in y + 1..=2 * y {
            *m.entry((ell * yy * yy) as i64).or_default() += 1;
        }
    }
    m.into_iter().collect()
}

/// Exact spectrum from pairs of distinct values `ℓy²`: `R(n) = Σ_v c(v) c(v − n)`.
///
/// `budget` caps `L²·Y²`, the size of the quadruple space.
pub fn representation_spectrum(l: u64, y: u64, budget: u64) -> Result<RepresentationSpectrum> {
    if l == 0 || y == 0 {
        return Err(crate::Error::Domain("L and Y must be at least 1".into()));
    }
    let quads = (l as u128 * y as u128).pow(2);
    check_budget(quads, budget)?;
    let vals = value_multiset(l, y);
    let partials: Vec<BTreeMap<i64, u64>> = vals
        .par_chunks(64)
        .map(|chunk| {
            let mut local = BTreeMap::new();
            for &(v1, c1) in chunk {
                for &(v2, c2) in &vals {
                    *local.entry(v1 - v2).or_insert(0u64) += c1 * c2;
                }
            }
            local
        })
        .collect();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for part in partials {
        for (k, v) in part {
            *counts.entry(k).or_default() += v;
        }
    }
    let moment1 = counts.values().map(|&c| c as u128).sum();
    let moment2 = counts.values().map(|&c| (c as u128).pow(2)).sum();
    Ok(RepresentationSpectrum { l, y, y_count: y, counts, moment1, moment2 })
}

/// Quadruple-loop reference used by tests and the bench.
pub fn representation_spectrum_naive(l: u64, y: u64) -> BTreeMap<i64, u64> {
    let mut counts = BTreeMap::new();
    for l1 in 1..=l {
        for l2 in 1..=l {
            for y1 in y + 1..=2 * y {
                for y2 in y + 1..=2 * y {
                    let n = (l1 * y1 * y1) as i64 - (l2 * y2 * y2) as i64;
                    *counts.entry(n).or_insert(0u64) += 1;
                }
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_examples() {
        let s = representation_spectrum(2, 1, u64::MAX).unwrap();
        assert_eq!((s.r(0), s.r(4), s.r(-4)), (2, 1, 1));
        assert_eq!((s.moment1, s.moment2), (4, 6));
        let s = representation_spectrum(1, 1, u64::MAX).unwrap();
        assert_eq!((s.r(0), s.moment2), (1, 1));
    }

    #[test]
    fn matches_naive_at_eight() {
        let s = representation_spectrum(8, 8, u64::MAX).unwrap();
        assert_eq!(s.counts, representation_spectrum_naive(8, 8));
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(representation_spectrum(100, 100, 1000), Err(crate::Error::Budget { .. })));
    }
}
