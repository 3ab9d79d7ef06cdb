use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// A decimal real `num / 10^scale`.
///
/// When `exact` is false the value is a truncation or rounding of some real
/// `x` with `|x − num/10^scale| ≤ 10^(−scale)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real {
    num: BigInt,
    scale: u32,
    exact: bool,
}

pub(crate) fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

impl Real {
    pub fn zero() -> Self {
        Self { num: BigInt::zero(), scale: 0, exact: true }
    }

    pub fn from_parts(num: BigInt, scale: u32, exact: bool) -> Self {
        Self { num, scale, exact }
    }

    /// Parses a plain decimal literal such as `-12.5` or `1.41421356`.
    ///
    /// `exact = false` declares the digits to be an approximation of an
    /// irrational (the usual case for a digits file).
    pub fn parse(input: &str, exact: bool) -> Result<Self> {
        let s = input.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let ok = !(int_part.is_empty() && frac_part.is_empty())
            && int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::parse("decimal", input));
        }
        let mut num: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| Error::parse("decimal", input))?;
        if neg {
            num = -num;
        }
        Ok(Self { num, scale: frac_part.len() as u32, exact })
    }

    /// `√n` to `digits` decimals (exact when `n` is a perfect square).
    pub fn sqrt(n: u64, digits: u32) -> Self {
        let target = BigUint::from(n) * pow10(2 * digits).magnitude();
        let root = target.sqrt();
        let exact = &root * &root == target;
        Self { num: BigInt::from_biguint(Sign::Plus, root), scale: digits, exact }
    }

    /// The golden ratio `(1 + √5)/2` to `digits` decimals.
    pub fn golden_ratio(digits: u32) -> Self {
        let s = Self::sqrt(5, digits + 1);
        let num = (s.num + pow10(digits + 1)) / BigInt::from(20);
        Self { num, scale: digits, exact: false }
    }

    /// Named constants: `sqrt<k>` and `golden` (alias `phi`).
    pub fn named(name: &str, digits: u32) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if lower == "golden" || lower == "phi" {
            return Ok(Self::golden_ratio(digits));
        }
        if let Some(k) = lower.strip_prefix("sqrt") {
            let k: u64 = k.parse().map_err(|_| Error::parse("constant", name))?;
            return Ok(Self::sqrt(k, digits));
        }
        Err(Error::parse("constant", name))
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Numerator when rescaled to `scale ≥ self.scale`.
    pub fn num_at(&self, scale: u32) -> BigInt {
        assert!(scale >= self.scale);
        &self.num * pow10(scale - self.scale)
    }

    /// Bounds `(lo, hi, den)` with the true value in `[lo/den, hi/den]`.
    pub fn enclosure(&self) -> (BigInt, BigInt, BigInt) {
        let den = pow10(self.scale);
        let e = if self.exact { BigInt::zero() } else { BigInt::one() };
        (&self.num - &e, &self.num + &e, den)
    }

    pub fn to_f64(&self) -> f64 {
        let den = pow10(self.scale);
        let (q, r) = self.num.div_mod_floor(&den);
        let frac = ratio_f64(&r, &den);
        q.to_f64().unwrap_or(f64::NAN) + frac
    }
}

/// `a / b` in double precision for large integers.
pub(crate) fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    let shift = b.bits().saturating_sub(60);
    let a2 = a >> shift;
    let b2 = b >> shift;
    a2.to_f64().unwrap_or(f64::NAN) / b2.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.num.abs().to_string();
        let k = self.scale as usize;
        let padded = if s.len() <= k { format!("{}{}", "0".repeat(k + 1 - s.len()), s) } else { s };
        let (i, d) = padded.split_at(padded.len() - k);
        let sign = if self.num.is_negative() { "-" } else { "" };
        if k == 0 {
            write!(f, "{sign}{i}")
        } else {
            write!(f, "{sign}{i}.{d}")
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `‖x‖`, the distance from `x` to the nearest integer.
pub fn fractional_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// `‖num / den‖` as an exact pair `(distance numerator, den)` for `den > 0`.
pub(crate) fn fractional_distance_exact(num: &BigInt, den: &BigInt) -> BigInt {
    let r = num.mod_floor(den);
    let other = den - &r;
    if r <= other {
        r
    } else {
        other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r = Real::parse("-12.050", true).unwrap();
        assert_eq!(r.to_string(), "-12.050");
        assert_eq!(Real::parse("0.5", true).unwrap().to_f64(), 0.5);
        assert!(Real::parse("1.2.3", true).is_err());
        assert!(Real::parse("", true).is_err());
    }

    #[test]
    fn sqrt_digits() {
        let r = Real::sqrt(2, 20);
        assert_eq!(r.to_string(), "1.41421356237309504880");
        assert!(!r.is_exact());
        assert!(Real::sqrt(49, 5).is_exact());
        assert_eq!(Real::golden_ratio(10).to_string(), "1.6180339887");
    }

    #[test]
    fn distance_examples() {
        assert!((fractional_distance(0.3) - 0.3).abs() < 1e-15);
        assert!((fractional_distance(0.7) - 0.3).abs() < 1e-15);
        assert_eq!(fractional_distance(-2.5), 0.5);
        let d = fractional_distance_exact(&BigInt::from(-25), &BigInt::from(10));
        assert_eq!(d, BigInt::from(5));
    }
}
