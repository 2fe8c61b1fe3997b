//! Work limits for the exhaustive procedures.
//!
//! Every exhaustive search in the crate checks its expected amount of work
//! against a [`Budget`] before starting and refuses with
//! [`Error::Capacity`](crate::Error::Capacity) instead of running for hours.
//! Budgets can be overridden from a `key=value,key=value` string, which is
//! what the `MMS_LAB_BUDGET` environment variable and the CLI `--budget`
//! flag carry.

use crate::error::{invalid, Result};

/// Name of the environment variable read by [`Budget::from_env`].
pub const BUDGET_ENV: &str = "MMS_LAB_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Largest vertex count accepted by the subset-enumeration graph checker.
    pub graph_vertices: usize,
    /// Largest number of LP instances the hypergraph oracle may solve.
    pub lp_instances: u64,
    /// Largest number of (deleted edge set, candidate set) pairs examined by
    /// the pseudo-matching sufficiency check.
    pub enumeration: u64,
    /// Largest number of partitions enumerated by brute-force searches.
    pub partitions: u64,
    /// Largest side |A| for the exhaustive Lebensold inequality check.
    pub lebensold_side: usize,
    /// Largest vertex count for the exact independence number.
    pub alpha_vertices: usize,
    /// Largest family produced by the layered partition construction.
    pub family_size: u64,
    /// Largest number of block unions hashed by the conflict checker.
    pub unions: u64,
    /// Largest vertex count of the auxiliary partition hypergraph.
    pub aux_vertices: u64,
    /// Rejection attempts allowed when sampling random regular graphs.
    pub regular_attempts: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            graph_vertices: 24,
            lp_instances: 500_000,
            enumeration: 5_000_000,
            partitions: 10_000,
            lebensold_side: 20,
            alpha_vertices: 30,
            family_size: 1_000_000,
            unions: 20_000_000,
            aux_vertices: 200_000,
            regular_attempts: 200_000,
        }
    }
}

impl Budget {
    /// Parses overrides of the form `lp_instances=1000,graph_vertices=20` on
    /// top of the defaults.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut budget = Budget::default();
        budget.apply(spec)?;
        Ok(budget)
    }

    /// Applies `key=value` overrides in place.
    pub fn apply(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("budget entry `{item}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .replace('_', "")
                .parse()
                .map_err(|_| invalid(format!("budget value in `{item}` is not an integer")))?;
            match key.trim() {
                "graph_vertices" => self.graph_vertices = value as usize,
                "lp_instances" => self.lp_instances = value,
                "enumeration" => self.enumeration = value,
                "partitions" => self.partitions = value,
                "lebensold_side" => self.lebensold_side = value as usize,
                "alpha_vertices" => self.alpha_vertices = value as usize,
                "family_size" => self.family_size = value,
                "unions" => self.unions = value,
                "aux_vertices" => self.aux_vertices = value,
                "regular_attempts" => self.regular_attempts = value,
                other => return Err(invalid(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(())
    }

    /// Defaults overridden by `MMS_LAB_BUDGET`, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(spec) => Budget::parse_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_on_defaults() {
        let b = Budget::parse_overrides("lp_instances=10, graph_vertices=12").unwrap();
        assert_eq!(b.lp_instances, 10);
        assert_eq!(b.graph_vertices, 12);
        assert_eq!(b.partitions, Budget::default().partitions);
    }

    #[test]
    fn rejects_unknown_keys_and_garbage() {
        assert!(Budget::parse_overrides("nope=1").is_err());
        assert!(Budget::parse_overrides("lp_instances").is_err());
        assert!(Budget::parse_overrides("lp_instances=x").is_err());
        assert_eq!(Budget::parse_overrides("").unwrap(), Budget::default());
    }
}
