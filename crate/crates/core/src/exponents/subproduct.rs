use num_traits::{Signed, Zero};

use crate::exact::{qi, Q};
use crate::{Error, Result};

use super::ExponentParams;

/// Picks indices `C` with `Σ_{i∈C} ρ_i ∈ [g, 1/3 − 4σ]`.
///
/// Hypotheses: `ρ_1 ≥ … ≥ ρ_t ≥ 0` summing to `γ` with
/// `1/3 − 4σ < γ < 2/3 − 8σ`, `0 < g ≤ 1/6 − 2σ` and `ρ_1 ≤ γ − g`.
///
/// Construction: if the largest part is already at least `g` it either lies
/// in the window or exceeds `f`, in which case the remaining parts do. If
/// every part is below `g`, prefix sums grow by less than `g` per step and
/// `2g ≤ f`, so the first prefix reaching `g` cannot overshoot `f`.
pub fn find_subproduct(rhos: &[Q], g: &Q, p: &ExponentParams) -> Result<Vec<usize>> {
    let f = &p.f;
    let bad = |msg: String| Err(Error::HypothesisViolation(msg));
    if rhos.is_empty() {
        return bad("empty exponent list".into());
    }
    if rhos.iter().any(|r| r.is_negative()) {
        return bad("exponents must be nonnegative".into());
    }
    if rhos.windows(2).any(|w| w[0] < w[1]) {
        return bad("exponents must be sorted in descending order".into());
    }
    let gamma: Q = rhos.iter().fold(Q::zero(), |acc, r| acc + r);
    let gamma_hi = qi(2) * f;
    if !(gamma > *f && gamma < gamma_hi) {
        return bad(format!("sum {gamma} outside (1/3 - 4σ, 2/3 - 8σ)"));
    }
    if !g.is_positive() || *g > f / qi(2) {
        return bad(format!("g = {g} outside (0, 1/6 - 2σ]"));
    }
    if rhos[0] > &gamma - g {
        return bad("largest exponent exceeds γ - g".into());
    }

    if rhos[0] >= *g {
        if rhos[0] <= *f {
            return Ok(vec![0]);
        }
        // ρ_1 > f: the tail sums to γ − ρ_1 ∈ [g, f).
        return Ok((1..rhos.len()).collect());
    }
    let mut acc = Q::zero();
    for (i, r) in rhos.iter().enumerate() {
        acc += r;
        if acc >= *g {
            debug_assert!(acc <= *f);
            return Ok((0..=i).collect());
        }
    }
    unreachable!("total exceeds f >= g, so some prefix reaches g")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, q};

    fn qs(xs: &[&str]) -> Vec<Q> {
        xs.iter().map(|x| parse_rational(x).unwrap()).collect()
    }

    #[test]
    fn single_element_in_window() {
        let p = ExponentParams::default();
        let c = find_subproduct(&qs(&["0.20", "0.15", "0.10"]), &q(12, 100), &p).unwrap();
        assert_eq!(c, vec![0]);
    }

    #[test]
    fn two_element_accumulation() {
        let p = ExponentParams::default();
        let c = find_subproduct(&qs(&["0.11", "0.11", "0.11", "0.11"]), &q(13, 100), &p).unwrap();
        assert_eq!(c, vec![0, 1]);
    }

    #[test]
    fn large_head_uses_tail() {
        let p = ExponentParams::default();
        // ρ_1 = 0.30 > f ≈ 0.29524, tail 0.15 ∈ [0.12, f].
        let c = find_subproduct(&qs(&["0.30", "0.10", "0.05"]), &q(12, 100), &p).unwrap();
        assert_eq!(c, vec![1, 2]);
    }

    #[test]
    fn rejects_bad_hypotheses() {
        let p = ExponentParams::default();
        let unsorted = qs(&["0.10", "0.20", "0.15"]);
        assert!(matches!(find_subproduct(&unsorted, &q(12, 100), &p), Err(Error::HypothesisViolation(_))));
        let small_sum = qs(&["0.10", "0.10"]);
        assert!(find_subproduct(&small_sum, &q(12, 100), &p).is_err());
        let big_g = qs(&["0.20", "0.15", "0.10"]);
        assert!(find_subproduct(&big_g, &q(2, 10), &p).is_err());
    }
}
