//! Exact rational helpers for exponent algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational number used for every exponent of `N`.
pub type Q = BigRational;

/// `n / d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, an integer, or a decimal literal (`"0.45"`, `"1e-4"`,
/// `"-2.5E3"`) into an exact rational. Sums such as `"1/120+1e-4"` are also
/// accepted so that perturbed parameters stay exact.
pub fn parse_rational(input: &str) -> Result<Q> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse("rational", input));
    }
    // Split on '+' / '-' that are not leading and not part of an exponent.
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'/') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut total = Q::zero();
    for t in terms {
        total += parse_term(t).ok_or_else(|| Error::parse("rational", input))?;
    }
    Ok(total)
}

fn parse_term(t: &str) -> Option<Q> {
    let t = t.strip_prefix('+').unwrap_or(t);
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Option<Q> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Q::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Smallest integer `t` with `t ≥ base^r` for a nonnegative rational `r`.
///
/// Used to decide `p < base^r` exactly as `p < ceil_pow(base, r)`.
pub fn ceil_pow(base: u64, r: &Q) -> u64 {
    let (floor, exact) = floor_pow_exact(base, r);
    if exact {
        floor
    } else {
        floor + 1
    }
}

/// Largest integer `t` with `t ≤ base^r`.
pub fn floor_pow(base: u64, r: &Q) -> u64 {
    floor_pow_exact(base, r).0
}

fn floor_pow_exact(base: u64, r: &Q) -> (u64, bool) {
    assert!(!r.is_negative(), "exponent must be nonnegative");
    assert!(base >= 1);
    let num = r.numer().to_u32().expect("exponent numerator too large");
    let den = r.denom().to_u32().expect("exponent denominator too large");
    // base^r = (base^num)^(1/den)
    let target = num_bigint::BigUint::from(base).pow(num);
    let root = target.nth_root(den);
    let exact = root.pow(den) == target;
    (root.to_u64().expect("threshold exceeds u64"), exact)
}

/// Returns `true` if `x` is in `(0, 1)`, used by range checks.
pub fn in_unit_open(x: &Q) -> bool {
    x.is_positive() && *x < Q::one()
}
