use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::real::Real;
use crate::{Error, Result};

/// A convergent `a/q` of a continued-fraction expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub a: i64,
    pub q: u64,
}

/// Digits of `alpha` needed to certify convergents with `q ≤ q_max`.
pub fn required_digits(q_max: u64) -> u32 {
    (2.0 * (q_max.max(1) as f64).log10()).ceil() as u32 + 10
}

/// Partial quotients of `num/den` (den > 0).
fn partial_quotients(mut num: BigInt, mut den: BigInt, limit: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    while !den.is_zero() && out.len() < limit {
        let (a, r) = num.div_mod_floor(&den);
        out.push(a);
        num = den;
        den = r;
    }
    out
}

/// The convergents of `alpha` with denominator `q ≤ q_max`, ordered by `q`.
///
/// An inexact `alpha` is treated as the interval it certifies: a partial
/// quotient is used only if both ends of the interval agree on it, and the
/// list is returned only once the next denominator provably exceeds `q_max`.
/// Equal consecutive denominators (which happen only for `q = 1`) keep the
/// later, closer convergent.
pub fn convergents(alpha: &Real, q_max: u64) -> Result<Vec<Convergent>> {
    if q_max == 0 {
        return Err(Error::Domain("q_max must be positive".into()));
    }
    if !alpha.is_exact() && alpha.scale() < required_digits(q_max) {
        return Err(Error::Precision(format!(
            "alpha has {} digits, {} needed for q_max = {q_max}",
            alpha.scale(),
            required_digits(q_max)
        )));
    }
    let (lo, hi, den) = alpha.enclosure();
    let limit = 4 * (alpha.scale() as usize + 4);
    let ql = partial_quotients(lo.clone(), den.clone(), limit);
    let qh = partial_quotients(hi.clone(), den.clone(), limit);
    let common = ql.iter().zip(&qh).take_while(|(x, y)| x == y).count();
    let terminated = alpha.is_exact() && common == ql.len();

    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_cur, mut q_cur) = (ql[0].clone(), BigInt::one());
    let mut out: Vec<(BigInt, BigInt)> = vec![(p_cur.clone(), q_cur.clone())];
    let qmax = BigInt::from(q_max);
    let mut k = 1;
    loop {
        if k >= common {
            if terminated {
                break;
            }
            // The next quotient is at least 1.
            if &q_cur + &q_prev > qmax {
                break;
            }
            return Err(Error::Precision(format!("alpha's digits certify convergents only up to q = {q_cur}")));
        }
        let a = &ql[k];
        let p_next = a * &p_cur + &p_prev;
        let q_next = a * &q_cur + &q_prev;
        if q_next > qmax {
            break;
        }
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        if out.last().is_some_and(|(_, q)| *q == q_cur) {
            out.pop();
        }
        out.push((p_cur.clone(), q_cur.clone()));
        k += 1;
    }

    out.into_iter()
        .map(|(p, q)| {
            certify(&p, &q, &lo, &hi, &den)?;
            let a = p.to_i64().ok_or_else(|| Error::Domain("convergent numerator overflows i64".into()))?;
            Ok(Convergent { a, q: q.to_u64().expect("q <= q_max") })
        })
        .collect()
}

/// Checks `|x − p/q| < 1/q²` for every `x` in `[lo/den, hi/den]`.
fn certify(p: &BigInt, q: &BigInt, lo: &BigInt, hi: &BigInt, den: &BigInt) -> Result<()> {
    // |x q − p| · q < 1  ⇔  |x_num q − p den| · q < den
    for x in [lo, hi] {
        let gap = (x * q - p * den).abs() * q;
        if gap >= *den {
            return Err(Error::Precision(format!("cannot certify |alpha - {p}/{q}| < 1/q^2 at this precision")));
        }
    }
    Ok(())
}

/// The last convergent with `q ≤ q_max`.
pub fn best_convergent(alpha: &Real, q_max: u64) -> Result<Convergent> {
    Ok(*convergents(alpha, q_max)?.last().expect("a0/1 is always present"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_list() {
        let c = convergents(&Real::sqrt(2, 40), 100).unwrap();
        let pairs: Vec<_> = c.iter().map(|c| (c.a, c.q)).collect();
        assert_eq!(pairs, vec![(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70)]);
        let err = (2f64.sqrt() - 99.0 / 70.0).abs();
        assert!(err < 1.0 / 4900.0 && (err - 7.2e-5).abs() < 1e-6);
    }

    #[test]
    fn golden_fibonacci() {
        let c = convergents(&Real::golden_ratio(40), 15).unwrap();
        let qs: Vec<_> = c.iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn insufficient_precision() {
        let r = Real::parse("1.4142", false).unwrap();
        assert!(matches!(convergents(&r, 100), Err(Error::Precision(_))));
    }

    #[test]
    fn exact_rational_terminates() {
        let r = Real::parse("0.75", true).unwrap();
        let c = convergents(&r, 1000).unwrap();
        assert_eq!(c.last().unwrap(), &Convergent { a: 3, q: 4 });
    }
}
