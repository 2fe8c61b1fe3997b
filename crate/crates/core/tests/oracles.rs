//! Cross-checks of the MMS deciders against independent brute-force oracles.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mms_core::combinatorics::Combinations;
use mms_core::matchings::{hall_violator, BipartiteGraph};
use mms_core::random::sample_gnp;
use mms_core::verify::{
    check_mms_graph, check_mms_lp, check_mms_random, lp_weighting_avoiding, witness_weighting,
};
use mms_core::{Budget, EdgeSet, Graph, Hypergraph, Weighting};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Fails iff some set of at most `delta - 1` deleted edges leaves an
/// independent set `S` with fewer than `|S|` neighbours. Every deletion set
/// and every vertex set is tried.
fn fails_by_exhaustion(g: &Graph) -> bool {
    let delta = g.min_degree();
    if delta == 0 {
        return false;
    }
    let n = g.n();
    let m = g.edge_count();
    for size in 0..delta.min(m + 1) {
        for deleted in Combinations::new(m, size) {
            let live: Vec<&[usize]> = (0..m).filter(|i| !deleted.contains(i)).map(|i| g.edge(i)).collect();
            for set in 1u32..(1 << n) {
                let inside = |v: usize| set & (1 << v) != 0;
                if live.iter().any(|e| inside(e[0]) && inside(e[1])) {
                    continue;
                }
                let mut nbrs = 0u32;
                for e in &live {
                    if inside(e[0]) {
                        nbrs |= 1 << e[1];
                    }
                    if inside(e[1]) {
                        nbrs |= 1 << e[0];
                    }
                }
                if nbrs.count_ones() < set.count_ones() {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn deletion_oracle_agrees_on_small_graphs() {
    let budget = Budget::default();
    let mut checked = 0;
    for seed in 0..150u64 {
        let n = 2 + (seed % 5) as usize;
        let g = sample_gnp(n, &q(1 + (seed % 4) as i64, 5), seed).unwrap();
        let expected = !fails_by_exhaustion(&g);
        assert_eq!(check_mms_graph(&g, &budget).unwrap().holds, expected, "seed {seed}");
        assert_eq!(check_mms_lp(&g, &budget).unwrap().holds, expected, "seed {seed}");
        checked += 1;
    }
    for n in 3..=6 {
        let kn = Graph::complete(n);
        assert_eq!(check_mms_graph(&kn, &budget).unwrap().holds, !fails_by_exhaustion(&kn));
    }
    assert_eq!(checked, 150);
}

#[test]
fn small_complete_graphs() {
    let budget = Budget::default();
    // only K3 and K5 fail
    let verdicts: Vec<bool> = (3..=7)
        .map(|n| check_mms_lp(&Graph::complete(n), &budget).unwrap().holds)
        .collect();
    assert_eq!(verdicts, vec![false, true, false, true, true]);
}

#[test]
fn falsifier_is_sound() {
    let budget = Budget::default();
    let mut found = 0;
    for seed in 0..60u64 {
        let g = sample_gnp(6, &q(1, 2), seed).unwrap();
        if let Some(f) = check_mms_random(&g, 300, seed) {
            found += 1;
            assert!(!f.sum().is_negative());
            assert!(g.nonneg_edge_count(&f).unwrap() < g.min_degree());
            assert!(!check_mms_lp(&g, &budget).unwrap().holds, "seed {seed}");
        }
    }
    assert!(found > 0);
    let c5 = Graph::cycle(5).unwrap();
    assert!(check_mms_random(&c5, 1000, 3).is_some());
}

#[test]
fn falsifier_finds_nothing_on_holding_graphs() {
    let budget = Budget::default();
    for n in [4usize, 6, 8] {
        let kn = Graph::complete(n);
        assert!(check_mms_graph(&kn, &budget).unwrap().holds);
        assert!(check_mms_random(&kn, 500, 1).is_none());
    }
}

/// On an odd cycle, a weighting with nonnegative sum and exactly one
/// nonnegative edge `uv` has `f(u), f(v) >= 0` and exactly one nonnegative
/// endpoint on every other edge.
#[test]
fn odd_cycle_single_nonnegative_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for m in [2usize, 3] {
        let n = 2 * m + 1;
        let cycle = Graph::cycle(n).unwrap();
        let mut hits = 0;
        for _ in 0..200_000 {
            // alternating signs make single nonnegative edges common
            let raw: Vec<i64> = (0..n)
                .map(|i| if i % 2 == 0 { rng.gen_range(0..=12) } else { -rng.gen_range(0..=12) })
                .collect();
            let shift = rng.gen_range(0..n as i64);
            let f: Vec<BigRational> = (0..n).map(|i| q(raw[(i + shift as usize) % n], 1)).collect();
            let w = Weighting::new(f.clone());
            if w.sum().is_negative() {
                continue;
            }
            let nonneg = cycle.nonneg_edges(&w).unwrap();
            if nonneg.len() != 1 {
                continue;
            }
            hits += 1;
            let uv = cycle.edge(nonneg.indices()[0]);
            assert!(!f[uv[0]].is_negative() && !f[uv[1]].is_negative());
            for (i, e) in cycle.edges().iter().enumerate() {
                if i != nonneg.indices()[0] {
                    let signs = e.iter().filter(|&&v| !f[v].is_negative()).count();
                    assert_eq!(signs, 1, "edge {e:?} under {f:?}");
                }
            }
        }
        assert!(hits > 20, "only {hits} samples met the condition for m = {m}");
    }
}

/// A weighting making every edge outside `T` negative also works for any
/// larger `T`, so feasibility only grows along supersets.
#[test]
fn lp_feasibility_is_monotone_in_the_allowed_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut feasible_seen = 0;
    for seed in 0..120u64 {
        let n = rng.gen_range(3..=7usize);
        let k = rng.gen_range(2..=3usize);
        let all: Vec<Vec<usize>> = Combinations::new(n, k).collect();
        let edges: Vec<Vec<usize>> = all.into_iter().filter(|_| rng.gen_bool(0.6)).collect();
        let h = Hypergraph::new(n, k, edges).unwrap();
        let m = h.edge_count();
        let t: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.3)).collect();
        let bigger: Vec<usize> = (0..m).filter(|i| t.contains(i) || rng.gen_bool(0.3)).collect();
        let small = EdgeSet::new(t, m).unwrap();
        let large = EdgeSet::new(bigger, m).unwrap();
        if let Some(f) = lp_weighting_avoiding(&h, &small) {
            feasible_seen += 1;
            assert!(lp_weighting_avoiding(&h, &large).is_some(), "seed {seed}");
            assert!(!f.sum().is_negative());
            for (i, e) in h.edges().iter().enumerate() {
                if !small.contains(i) {
                    let s = e.iter().fold(BigRational::zero(), |acc, &v| acc + &f.values()[v]);
                    assert!(s.is_negative());
                }
            }
        }
    }
    assert!(feasible_seen > 10);
}

/// The rotated C5 witness: S = {0, 2, 4} after deleting the edge 4-0.
#[test]
fn rotated_c5_witness() {
    let c5 = Graph::cycle(5).unwrap();
    let deleted = EdgeSet::from_edges(&c5, &[vec![0, 4]]).unwrap();
    let b = BipartiteGraph::from_host(&c5, &[0, 2, 4], &[1, 3], &deleted).unwrap();
    assert_eq!(hall_violator(&b), Some(vec![0, 2, 4]));
    let f = witness_weighting(&c5, &[0, 2, 4], &deleted).unwrap();
    assert_eq!(f.values(), &[q(1, 1), q(-11, 8), q(1, 1), q(-11, 8), q(1, 1)]);
    assert_eq!(f.sum(), q(1, 4));
    assert_eq!(c5.nonneg_edge_count(&f).unwrap(), 1);
}
