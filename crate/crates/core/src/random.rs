//! Seeded random graphs and MMS frequency experiments.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`. `G(n, p)` draws one
//! `u64` per vertex pair, pairs in lexicographic order `(0,1), (0,2), ..`,
//! and keeps the pair iff `x * q < a * 2^64` for `p = a / q`. Trial `i` of an
//! experiment with seed `s` uses the seed [`trial_seed`]`(s, i)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::combinatorics::maximum_independent_set;
use crate::error::{capacity, invalid, Result};
use crate::hypergraph::{format_rational, Graph};
use crate::verify::check_mms_graph;

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix(seed + (i + 1) * 0x9E3779B97F4A7C15)` with SplitMix64's finaliser.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    mix(seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn probability_parts(p: &BigRational) -> Result<(u128, u128)> {
    if p.is_negative() || *p > BigRational::from_integer(1.into()) {
        return Err(invalid(format!("probability {} is outside [0, 1]", format_rational(p))));
    }
    match (p.numer().to_u64(), p.denom().to_u64()) {
        (Some(a), Some(q)) => Ok((a as u128, q as u128)),
        _ => Err(invalid("probability numerator and denominator must fit in 64 bits")),
    }
}

pub fn sample_gnp(n: usize, p: &BigRational, seed: u64) -> Result<Graph> {
    let (a, q) = probability_parts(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let x = rng.next_u64() as u128;
            // a < 2^64, so a << 64 fits
            if x * q < a << 64 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Uniform simple `d`-regular graph by the pairing model with rejection.
/// For `d > (n - 1) / 2` the complement is sampled instead.
pub fn sample_regular(n: usize, d: usize, seed: u64, budget: &Budget) -> Result<Graph> {
    if d >= n.max(1) {
        return Err(invalid(format!("degree {d} needs more than {n} vertices")));
    }
    if n * d % 2 == 1 {
        return Err(invalid(format!("n d = {} is odd", n * d)));
    }
    if 2 * d > n.saturating_sub(1) {
        return Ok(sample_regular(n, n - 1 - d, seed, budget)?.complement());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..budget.regular_attempts {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        edges.sort_unstable();
        for (i, e) in edges.iter().enumerate() {
            if e.0 == e.1 || (i > 0 && edges[i - 1] == *e) {
                continue 'attempt;
            }
        }
        return Graph::new(n, edges);
    }
    Err(capacity(format!(
        "no simple {d}-regular graph on {n} vertices after {} pairings",
        budget.regular_attempts
    )))
}

fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbours(v).to_vec()).collect()
}

/// Exact independence number; `g.n()` must not exceed `budget.alpha_vertices`.
pub fn independence_number(g: &Graph, budget: &Budget) -> Result<usize> {
    if g.n() > budget.alpha_vertices {
        return Err(capacity(format!(
            "exact independence number is capped at {} vertices",
            budget.alpha_vertices
        )));
    }
    Ok(maximum_independent_set(&adjacency(g)).len())
}

/// Size of the independent set built by repeatedly taking a vertex of
/// least remaining degree; a lower bound on the independence number.
pub fn greedy_independence(g: &Graph) -> usize {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut size = 0;
    loop {
        let pick = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| g.neighbours(v).iter().filter(|&&u| alive[u]).count());
        let Some(v) = pick else { return size };
        size += 1;
        alive[v] = false;
        for &u in g.neighbours(v) {
            alive[u] = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub delta: usize,
    pub alpha: usize,
    pub alpha_exact: bool,
    pub mms: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub p: String,
    pub trials: u64,
    pub seed: u64,
    pub records: Vec<TrialRecord>,
    pub mms_count: u64,
    pub frequency: f64,
    /// `(delta, number of trials)` in increasing order of `delta`.
    pub delta_histogram: Vec<(usize, u64)>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,delta,alpha,alpha_exact,mms\n");
        for r in &self.records {
            writeln!(out, "{},{},{},{},{}", r.trial, r.delta, r.alpha, r.alpha_exact, r.mms)
                .expect("writing to a string");
        }
        out
    }
}

/// Samples `trials` graphs from `G(n, p)` and records minimum degree,
/// independence number and the MMS verdict of each. Graphs with an isolated
/// vertex hold vacuously and skip the checker.
pub fn mms_experiment(
    n: usize,
    trials: u64,
    p: &BigRational,
    seed: u64,
    budget: &Budget,
) -> Result<ExperimentReport> {
    probability_parts(p)?;
    let cap = budget.graph_vertices.min(63);
    if n > cap {
        return Err(capacity(format!("experiments check graphs of at most {cap} vertices")));
    }
    let mut records = Vec::with_capacity(trials as usize);
    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    for trial in 0..trials {
        let g = sample_gnp(n, p, trial_seed(seed, trial))?;
        let delta = g.min_degree();
        let (alpha, alpha_exact) = if n <= budget.alpha_vertices {
            (independence_number(&g, budget)?, true)
        } else {
            (greedy_independence(&g), false)
        };
        let mms = delta == 0 || check_mms_graph(&g, budget)?.holds;
        *histogram.entry(delta).or_default() += 1;
        records.push(TrialRecord { trial, delta, alpha, alpha_exact, mms });
    }
    let mms_count = records.iter().filter(|r| r.mms).count() as u64;
    Ok(ExperimentReport {
        n,
        p: format_rational(p),
        trials,
        seed,
        records,
        mms_count,
        frequency: if trials == 0 { 0.0 } else { mms_count as f64 / trials as f64 },
        delta_histogram: histogram.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(sample_gnp(6, &q(0, 1), 1).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(6, &q(1, 1), 1).unwrap(), Graph::complete(6));
        let a = sample_gnp(10, &q(1, 2), 42).unwrap();
        assert_eq!(a, sample_gnp(10, &q(1, 2), 42).unwrap());
        assert_ne!(a, sample_gnp(10, &q(1, 2), 43).unwrap());
        assert!(sample_gnp(3, &q(3, 2), 0).is_err());
        assert!(sample_gnp(3, &q(-1, 2), 0).is_err());
    }

    #[test]
    fn regular_samples() {
        let b = Budget::default();
        let c4 = sample_regular(4, 2, 5, &b).unwrap();
        assert_eq!((c4.regularity(), c4.is_connected()), (Some(2), true));
        assert_eq!(sample_regular(5, 4, 5, &b).unwrap(), Graph::complete(5));
        for seed in 0..10 {
            assert_eq!(sample_regular(10, 3, seed, &b).unwrap().regularity(), Some(3));
            assert_eq!(sample_regular(10, 7, seed, &b).unwrap().regularity(), Some(7));
        }
        assert_eq!(sample_regular(6, 0, 1, &b).unwrap().edge_count(), 0);
        assert!(sample_regular(5, 3, 0, &b).is_err());
        assert!(sample_regular(4, 4, 0, &b).is_err());
    }

    #[test]
    fn independence_examples() {
        let b = Budget::default();
        assert_eq!(independence_number(&Graph::cycle(5).unwrap(), &b).unwrap(), 2);
        assert_eq!(independence_number(&Graph::complete(7), &b).unwrap(), 1);
        assert_eq!(independence_number(&Graph::petersen(), &b).unwrap(), 4);
        assert_eq!(greedy_independence(&Graph::petersen()), 4);
        let small = Budget { alpha_vertices: 4, ..Budget::default() };
        assert!(independence_number(&Graph::cycle(5).unwrap(), &small).is_err());
    }

    #[test]
    fn experiment_reports() {
        let b = Budget::default();
        let empty = mms_experiment(12, 10, &q(0, 1), 3, &b).unwrap();
        assert_eq!(empty.frequency, 1.0);
        assert_eq!(empty.delta_histogram, vec![(0, 10)]);
        let k8 = mms_experiment(8, 1, &q(1, 1), 0, &b).unwrap();
        assert!(k8.records[0].mms);
        let k5 = mms_experiment(5, 1, &q(1, 1), 0, &b).unwrap();
        assert!(!k5.records[0].mms);
        let r = mms_experiment(9, 5, &q(1, 2), 11, &b).unwrap();
        assert_eq!(r.to_json(), mms_experiment(9, 5, &q(1, 2), 11, &b).unwrap().to_json());
        assert!(r.to_csv().starts_with("trial,delta,alpha,alpha_exact,mms\n0,"));
        assert_eq!(r.to_csv().lines().count(), 6);
        assert!(mms_experiment(70, 1, &q(1, 2), 0, &b).is_err());
    }
}
