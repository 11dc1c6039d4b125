//! Search budgets shared by the exponential procedures.
//!
//! `SUNFLOWER_BUDGET` overrides the defaults: either a single integer applied to every
//! budget, or a comma-separated list of `key=value` pairs using the field names below.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "SUNFLOWER_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Subsets generated while materialising a shadow (sum of `2^|U|`).
    pub shadow: u64,
    /// Backtracking nodes visited by the exact sunflower search.
    pub sunflower: u64,
    /// k-combinations examined by the brute-force sunflower oracle.
    pub oracle: u64,
    /// Splits enumerated by the exhaustive split search.
    pub splits: u64,
    /// Ordered strip tuples enumerated by the transversal brute count.
    pub transversal: u64,
    /// Members produced by the extremal construction.
    pub extremal: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            shadow: 1 << 22,
            sunflower: 50_000_000,
            oracle: 1 << 22,
            splits: 2_000_000,
            transversal: 5_000_000,
            extremal: 1 << 20,
        }
    }
}

impl Budget {
    pub fn uniform(limit: u64) -> Self {
        Budget {
            shadow: limit,
            sunflower: limit,
            oracle: limit,
            splits: limit,
            transversal: limit,
            extremal: limit,
        }
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Self::parse(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Ok(limit) = spec.parse::<u64>() {
            return Ok(Self::uniform(limit));
        }
        let mut budget = Self::default();
        for pair in spec.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("budget entry `{pair}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("budget value `{value}` is not an integer")))?;
            let slot = match key.trim() {
                "shadow" => &mut budget.shadow,
                "sunflower" => &mut budget.sunflower,
                "oracle" => &mut budget.oracle,
                "splits" => &mut budget.splits,
                "transversal" => &mut budget.transversal,
                "extremal" => &mut budget.extremal,
                other => return Err(Error::InvalidArgument(format!("unknown budget key `{other}`"))),
            };
            *slot = value;
        }
        Ok(budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Budget::parse("17").unwrap(), Budget::uniform(17));
        let b = Budget::parse("shadow=5, sunflower=9").unwrap();
        assert_eq!(b.shadow, 5);
        assert_eq!(b.sunflower, 9);
        assert_eq!(b.splits, Budget::default().splits);
        assert!(Budget::parse("bogus=1").is_err());
        assert!(Budget::parse("shadow").is_err());
    }
}
