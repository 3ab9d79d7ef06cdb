use crate::{Error, Result};

/// Default cap on inner operations of any brute-force enumeration.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "SIEVECALC_BUDGET";

/// The enumeration cap: `SIEVECALC_BUDGET` if set and parseable (accepts
/// `1e9`-style literals), otherwise [`DEFAULT_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|s| parse_count(&s)).unwrap_or(DEFAULT_BUDGET)
}

/// Parses a nonnegative count written as an integer or a float literal.
pub fn parse_count(s: &str) -> Option<u64> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let v: f64 = s.parse().ok()?;
    (v.is_finite() && v >= 0.0 && v <= u64::MAX as f64).then(|| v.round() as u64)
}

pub(crate) fn check_budget(needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::Budget { needed: needed.min(u64::MAX as u128) as u64, cap });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e9"), Some(1_000_000_000));
        assert_eq!(parse_count("12_000"), Some(12_000));
        assert_eq!(parse_count("-1"), None);
        assert!(check_budget(11, 10).is_err());
        assert!(check_budget(10, 10).is_ok());
    }
}
