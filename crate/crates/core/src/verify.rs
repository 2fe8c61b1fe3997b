//! Deciding the MMS property.
//!
//! A hypergraph `H` has the MMS property when every vertex weighting with a
//! nonnegative total makes at least `delta(H)` edges nonnegative. This module
//! offers several routes to that question:
//!
//! * [`check_mms_graph`]: exact decision for graphs through Hall-violating
//!   sets. `G` fails iff some set `S` can be made independent, with fewer
//!   than `|S|` neighbours, by deleting at most `delta - 1` edges.
//! * [`check_mms_lp`]: exact LP oracle for any uniform hypergraph.
//! * [`check_mms_random`]: one-sided randomized falsifier.
//! * [`check_pseudo_matching_sufficient`]: the pseudo-matching sufficient
//!   condition for higher uniformities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::combinatorics::{binomial_u64, Combinations};
use crate::error::{capacity, invalid, Error, Result};
use crate::hypergraph::{format_rational, vertex_set, EdgeSet, Graph, Hypergraph, Weighting};
use crate::lp::{uniform_cover, CoverOutcome};

/// Certificate that a hypergraph does not have the MMS property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureWitness {
    /// For graph witnesses the deleted set `E'`; for LP witnesses the edges
    /// that were allowed to stay nonnegative. At most `delta - 1` edges.
    pub deleted: EdgeSet,
    /// Hall-violating set, independent in `G - deleted`. `None` for witnesses
    /// that do not come from the graph checker.
    pub hall_set: Option<Vec<usize>>,
    /// Weighting with nonnegative total and fewer than `delta` nonnegative edges.
    pub weighting: Weighting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmsVerdict {
    pub holds: bool,
    pub witness: Option<FailureWitness>,
}

impl MmsVerdict {
    pub fn holds() -> Self {
        MmsVerdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(witness: FailureWitness) -> Self {
        MmsVerdict {
            holds: false,
            witness: Some(witness),
        }
    }

    /// `{"holds":..,"witness":{"deleted":[[..]],"hall_set":[..]|null,"weighting":[..]}|null}`
    pub fn to_json(&self, host: &Hypergraph) -> String {
        serde_json::to_string(&VerdictDoc::new(self, host)).expect("plain data serializes")
    }
}

#[derive(Serialize)]
struct VerdictDoc {
    holds: bool,
    witness: Option<WitnessDoc>,
}

#[derive(Serialize)]
struct WitnessDoc {
    deleted: Vec<Vec<usize>>,
    hall_set: Option<Vec<usize>>,
    weighting: Vec<String>,
}

impl VerdictDoc {
    fn new(v: &MmsVerdict, host: &Hypergraph) -> Self {
        VerdictDoc {
            holds: v.holds,
            witness: v.witness.as_ref().map(|w| WitnessDoc {
                deleted: w.deleted.edges(host).into_iter().map(<[usize]>::to_vec).collect(),
                hall_set: w.hall_set.clone(),
                weighting: w.weighting.values().iter().map(format_rational).collect(),
            }),
        }
    }
}

/// Checks the witness invariants against its host graph.
pub fn witness_is_valid(g: &Hypergraph, w: &FailureWitness) -> Result<bool> {
    let delta = g.min_degree();
    if delta == 0 || w.deleted.len() > delta - 1 {
        return Ok(false);
    }
    if w.weighting.sum().is_negative() || g.nonneg_edge_count(&w.weighting)? > delta - 1 {
        return Ok(false);
    }
    if let Some(s) = &w.hall_set {
        if s.is_empty() || !g.is_independent(s, &w.deleted)? {
            return Ok(false);
        }
        let gr = Graph::from_hypergraph(g.clone())?;
        if external_neighbourhood(&gr, s, &w.deleted).len() >= s.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Neighbours of `s` outside `s` in `G - deleted`, sorted.
fn external_neighbourhood(g: &Graph, s: &[usize], deleted: &EdgeSet) -> Vec<usize> {
    let mut in_s = vec![false; g.n()];
    for &v in s {
        in_s[v] = true;
    }
    let mut out = Vec::new();
    for &v in s {
        for &u in g.neighbours(v) {
            if in_s[u] {
                continue;
            }
            let idx = g.edge_index_of(u, v).expect("adjacent");
            if !deleted.contains(idx) {
                out.push(u);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Cheapest way to turn one vertex set into a Hall violator.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    set: u64,
    cost: usize,
}

impl Candidate {
    /// Order: cost, then size, then lexicographic order of the sorted members.
    fn better_than(&self, other: &Candidate) -> bool {
        if self.cost != other.cost {
            return self.cost < other.cost;
        }
        let (a, b) = (self.set.count_ones(), other.set.count_ones());
        if a != b {
            return a < b;
        }
        let diff = self.set ^ other.set;
        diff != 0 && (self.set & diff.wrapping_neg() & diff) != 0
    }
}

/// Minimum number of edge deletions that make `set` independent with fewer
/// than `|set|` neighbours, and the neighbour counts it was derived from.
fn deletion_cost(adj: &[u64], set: u64, cap: usize, scratch: &mut Vec<(u32, usize)>) -> Option<usize> {
    let mut doubled_internal = 0usize;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        doubled_internal += (adj[v] & set).count_ones() as usize;
    }
    let internal = doubled_internal / 2;
    if internal > cap {
        return None;
    }
    scratch.clear();
    for (u, &row) in adj.iter().enumerate() {
        if set & (1 << u) != 0 {
            continue;
        }
        let c = (row & set).count_ones();
        if c > 0 {
            scratch.push((c, u));
        }
    }
    let size = set.count_ones() as usize;
    let keep = size - 1;
    let mut cost = internal;
    if scratch.len() > keep {
        let drop = scratch.len() - keep;
        scratch.sort_unstable();
        cost += scratch[..drop].iter().map(|&(c, _)| c as usize).sum::<usize>();
    }
    (cost <= cap).then_some(cost)
}

/// The minimum-cost Hall violator of `g`, if its cost is at most `delta - 1`.
/// Returns the set and the deletions that realise it.
pub fn cheapest_hall_violator(g: &Graph, budget: &Budget) -> Result<Option<(Vec<usize>, EdgeSet)>> {
    let n = g.n();
    let limit = budget.graph_vertices.min(63);
    if n > limit {
        return Err(capacity(format!(
            "graph checker enumerates all vertex subsets; {n} vertices exceeds the cap of {limit} \
             (use the LP oracle or the randomized falsifier instead)"
        )));
    }
    let delta = g.min_degree();
    if delta == 0 {
        return Ok(None);
    }
    let cap = delta - 1;
    let adj: Vec<u64> = (0..n).map(|v| g.neighbour_mask(v)).collect();
    let mut scratch = Vec::with_capacity(n);
    let mut best: Option<Candidate> = None;
    for set in 1u64..(1u64 << n) {
        let Some(cost) = deletion_cost(&adj, set, cap, &mut scratch) else {
            continue;
        };
        let cand = Candidate { set, cost };
        if best.map_or(true, |b| cand.better_than(&b)) {
            best = Some(cand);
        }
    }
    let Some(best) = best else {
        return Ok(None);
    };

    let members: Vec<usize> = (0..n).filter(|&v| best.set & (1 << v) != 0).collect();
    let mut deleted: Vec<usize> = g.induced_edge_set(&members)?.indices().to_vec();
    deletion_cost(&adj, best.set, cap, &mut scratch);
    let keep = members.len() - 1;
    if scratch.len() > keep {
        let drop = scratch.len() - keep;
        for &(_, u) in &scratch[..drop] {
            for &v in &members {
                if g.has_edge(u, v) {
                    deleted.push(g.edge_index_of(u, v).expect("adjacent"));
                }
            }
        }
    }
    deleted.sort_unstable();
    Ok(Some((members, EdgeSet::new(deleted, g.edge_count())?)))
}

/// Exact MMS decision for graphs.
///
/// Subsets are scanned by cost, then size, then lexicographically, and the
/// first minimum-cost violator is reported together with the explicit
/// weighting from [`witness_weighting`].
pub fn check_mms_graph(g: &Graph, budget: &Budget) -> Result<MmsVerdict> {
    let Some((hall_set, deleted)) = cheapest_hall_violator(g, budget)? else {
        return Ok(MmsVerdict::holds());
    };
    let weighting = witness_weighting(g, &hall_set, &deleted)?;
    let witness = FailureWitness {
        deleted,
        hall_set: Some(hall_set),
        weighting,
    };
    if !witness_is_valid(g, &witness)? {
        return Err(Error::Internal("graph witness failed its own check".into()));
    }
    Ok(MmsVerdict::fails(witness))
}

/// Weighting that realises a Hall violator `S` in `G - deleted`.
///
/// `S` gets `1`, its neighbourhood `N` in `G - deleted` gets
/// `(-|S| + eps) / |N|`, every other vertex gets `-eps / |V|`, with
/// `eps = (|S|/|N| - 1) / 2`. When `N` is empty, `S` gets `1` and the rest
/// `-1/|V|`. Only deleted edges can then be nonnegative.
pub fn witness_weighting(g: &Graph, s: &[usize], deleted: &EdgeSet) -> Result<Weighting> {
    let n = g.n();
    let s = vertex_set(n, s)?;
    if s.is_empty() {
        return Err(invalid("the Hall set must be nonempty"));
    }
    if let Some(&i) = deleted.indices().last() {
        if i >= g.edge_count() {
            return Err(invalid(format!("edge index {i} out of range")));
        }
    }
    let delta = g.min_degree();
    if delta == 0 || deleted.len() > delta - 1 {
        return Err(invalid(format!(
            "{} deleted edges exceed delta - 1 for delta = {delta}",
            deleted.len()
        )));
    }
    if !g.is_independent(&s, deleted)? {
        return Err(invalid("the Hall set is not independent after deletion"));
    }
    let nbrs = external_neighbourhood(g, &s, deleted);
    if nbrs.len() >= s.len() {
        return Err(invalid("the set satisfies Hall's condition after deletion"));
    }

    Ok(hall_weighting(n, &s, &nbrs))
}

/// The weighting of [`witness_weighting`] for a vertex count `n`, a set `s`
/// and its neighbourhood `nbrs`, without checking any graph preconditions.
///
/// The empty-neighbourhood branch cannot arise from a valid witness (every
/// vertex of `s` would need all of its `>= delta` edges deleted), so it is
/// reachable only through this function.
pub fn hall_weighting(n: usize, s: &[usize], nbrs: &[usize]) -> Weighting {
    let rat = |p: usize, q: usize| BigRational::new(BigInt::from(p), BigInt::from(q));
    let mut values = vec![BigRational::zero(); n];
    if nbrs.is_empty() {
        let rest = -rat(1, n);
        for v in values.iter_mut() {
            *v = rest.clone();
        }
    } else {
        let (size, nsize) = (s.len(), nbrs.len());
        let eps = (rat(size, nsize) - BigRational::one()) / BigRational::from_integer(2.into());
        let on_nbrs = (-rat(size, 1) + &eps) / rat(nsize, 1);
        let rest = -(&eps / rat(n, 1));
        for v in values.iter_mut() {
            *v = rest.clone();
        }
        for &u in nbrs {
            values[u] = on_nbrs.clone();
        }
    }
    for &v in s {
        values[v] = BigRational::one();
    }
    Weighting::new(values)
}

/// For a fixed set `allowed` of edges, a weighting with total `0` under
/// which every edge outside `allowed` is strictly negative, if one exists.
///
/// By Farkas' lemma such a weighting exists iff `H - allowed` has no
/// fractional perfect matching; the simplex multipliers of the infeasible
/// matching system, shifted to sum zero, are the weighting.
pub fn lp_weighting_avoiding(h: &Hypergraph, allowed: &EdgeSet) -> Option<Weighting> {
    let columns: Vec<&[usize]> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !allowed.contains(*i))
        .map(|(_, e)| e.as_slice())
        .collect();
    match uniform_cover(h.n(), &columns) {
        CoverOutcome::Cover(_) => None,
        CoverOutcome::Separator(pi) => {
            let n = h.n();
            let total = pi.iter().fold(BigRational::zero(), |a, b| a + b);
            let mean = total / BigRational::from_integer(BigInt::from(n));
            Some(Weighting::new(pi.into_iter().map(|p| p - &mean).collect()))
        }
    }
}

/// Exact LP oracle for any uniform hypergraph.
///
/// `H` fails iff for some set `T` of `delta - 1` edges there is a weighting
/// with nonnegative total that is negative on every edge outside `T`. Sets
/// smaller than `delta - 1` need not be tried: enlarging `T` only drops
/// constraints.
pub fn check_mms_lp(h: &Hypergraph, budget: &Budget) -> Result<MmsVerdict> {
    let delta = h.min_degree();
    if delta == 0 {
        return Ok(MmsVerdict::holds());
    }
    let size = delta - 1;
    let instances = binomial_u64(h.edge_count() as u64, size as u64);
    if instances > budget.lp_instances {
        return Err(capacity(format!(
            "LP oracle needs {instances} instances, budget is {}",
            budget.lp_instances
        )));
    }
    for t in Combinations::new(h.edge_count(), size) {
        let allowed = EdgeSet::from_sorted(t);
        if let Some(weighting) = lp_weighting_avoiding(h, &allowed) {
            let witness = FailureWitness {
                deleted: allowed,
                hall_set: None,
                weighting,
            };
            if !witness_is_valid(h, &witness)? {
                return Err(Error::Internal("LP witness failed its own check".into()));
            }
            return Ok(MmsVerdict::fails(witness));
        }
    }
    Ok(MmsVerdict::holds())
}

/// Randomized falsifier. Returns a weighting with nonnegative total and fewer
/// than `delta` nonnegative edges, or `None` (which proves nothing).
///
/// Trial `i` uses pattern `i mod 4`: one vertex at `1` and the rest at
/// `-1/(n-1)`; a random set `P` at `n - |P|` and the rest at `-|P|`; a random
/// set at `1` with the rest negative in random integer proportions; random
/// integers in `[-10, 10]` shifted to sum zero.
pub fn check_mms_random(h: &Hypergraph, trials: u64, seed: u64) -> Option<Weighting> {
    let n = h.n();
    let delta = h.min_degree();
    if delta == 0 || n == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let int = |x: i64| BigRational::from_integer(BigInt::from(x));
    for trial in 0..trials {
        let f = match trial % 4 {
            0 => Weighting::single_positive(n, rng.gen_range(0..n)),
            1 => {
                let p = rng.gen_range(1..=n.div_ceil(2).max(1)).min(n);
                order.shuffle(&mut rng);
                let mut values = vec![int(-(p as i64)); n];
                for &v in &order[..p] {
                    values[v] = int((n - p) as i64);
                }
                Weighting::new(values)
            }
            2 => {
                let p = rng.gen_range(1..=n.div_ceil(2).max(1)).min(n);
                order.shuffle(&mut rng);
                let mut values = vec![BigRational::zero(); n];
                if p == n {
                    for v in values.iter_mut() {
                        *v = BigRational::one();
                    }
                } else {
                    let shares: Vec<i64> = (p..n).map(|_| rng.gen_range(1..=4)).collect();
                    let total: i64 = shares.iter().sum();
                    for &v in &order[..p] {
                        values[v] = BigRational::one();
                    }
                    for (&v, &w) in order[p..].iter().zip(&shares) {
                        values[v] = -BigRational::new(BigInt::from(w * p as i64), BigInt::from(total));
                    }
                }
                Weighting::new(values)
            }
            _ => {
                let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
                let mean = BigRational::new(BigInt::from(raw.iter().sum::<i64>()), BigInt::from(n));
                Weighting::new(raw.iter().map(|&x| int(x) - &mean).collect())
            }
        };
        let count = h.nonneg_edge_count(&f).expect("weighting sized to host");
        if count < delta && !f.sum().is_negative() {
            return Some(f);
        }
    }
    None
}

/// Edges whose pairwise intersections lie inside `target` and whose union
/// covers `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoMatching {
    pub target: Vec<usize>,
    pub edges: EdgeSet,
}

impl PseudoMatching {
    /// Checks both defining conditions against `host`.
    pub fn is_valid(&self, host: &Hypergraph) -> bool {
        let mut in_target = vec![false; host.n()];
        for &v in &self.target {
            in_target[v] = true;
        }
        let edges = self.edges.edges(host);
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[i + 1..] {
                if e.iter().any(|v| !in_target[*v] && f.contains(v)) {
                    return false;
                }
            }
        }
        self.target.iter().all(|a| edges.iter().any(|e| e.contains(a)))
    }
}

/// Exhaustive search for a pseudo-matching of `H - deleted` saturating `target`.
///
/// `target` must be independent in `H - deleted`.
pub fn find_pseudo_matching(
    h: &Hypergraph,
    target: &[usize],
    deleted: &EdgeSet,
) -> Result<Option<PseudoMatching>> {
    let target = vertex_set(h.n(), target)?;
    if !h.is_independent(&target, deleted)? {
        return Err(invalid("target set is not independent after deletion"));
    }
    let mut in_target = vec![false; h.n()];
    for &v in &target {
        in_target[v] = true;
    }
    let available: Vec<usize> = (0..h.edge_count()).filter(|&i| !deleted.contains(i)).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for &i in &available {
        for &v in h.edge(i) {
            if in_target[v] {
                incident[v].push(i);
            }
        }
    }
    let mut search = PseudoSearch {
        h,
        in_target: &in_target,
        incident: &incident,
        cover: vec![0; h.n()],
        chosen: Vec::new(),
    };
    if search.run(&target) {
        let mut chosen = search.chosen;
        chosen.sort_unstable();
        return Ok(Some(PseudoMatching {
            target,
            edges: EdgeSet::new(chosen, h.edge_count())?,
        }));
    }
    Ok(None)
}

struct PseudoSearch<'a> {
    h: &'a Hypergraph,
    in_target: &'a [bool],
    incident: &'a [Vec<usize>],
    cover: Vec<u32>,
    chosen: Vec<usize>,
}

impl PseudoSearch<'_> {
    fn run(&mut self, target: &[usize]) -> bool {
        let Some(&a) = target.iter().find(|&&v| self.cover[v] == 0) else {
            return true;
        };
        for &i in &self.incident[a] {
            let e = self.h.edge(i);
            // outside the target, every vertex may be covered at most once
            if e.iter().any(|&v| !self.in_target[v] && self.cover[v] > 0) {
                continue;
            }
            for &v in e {
                self.cover[v] += 1;
            }
            self.chosen.push(i);
            if self.run(target) {
                return true;
            }
            self.chosen.pop();
            for &v in e {
                self.cover[v] -= 1;
            }
        }
        false
    }
}

/// True iff for every `E'` with `|E'| <= delta - 1` every independent set of
/// `H - E'` has a saturating pseudo-matching in `H - E'`. Sufficient for the
/// MMS property.
///
/// Only `|E'| = delta - 1` is enumerated: independence in `H - E'` and the
/// existence of a pseudo-matching are both monotone in `E'`.
pub fn check_pseudo_matching_sufficient(h: &Hypergraph, budget: &Budget) -> Result<bool> {
    let delta = h.min_degree();
    if delta == 0 {
        return Ok(true);
    }
    let n = h.n();
    let size = (delta - 1).min(h.edge_count());
    let deletions = binomial_u64(h.edge_count() as u64, size as u64);
    let work = if n >= 63 { u64::MAX } else { deletions.saturating_mul(1u64 << n) };
    if work > budget.enumeration {
        return Err(capacity(format!(
            "pseudo-matching check needs {deletions} deletion sets times 2^{n} vertex sets, budget is {}",
            budget.enumeration
        )));
    }
    let edge_masks: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    for t in Combinations::new(h.edge_count(), size) {
        let deleted = EdgeSet::from_sorted(t);
        let live: Vec<u64> = edge_masks
            .iter()
            .enumerate()
            .filter(|(i, _)| !deleted.contains(*i))
            .map(|(_, &m)| m)
            .collect();
        for set in 1u64..(1u64 << n) {
            if live.iter().any(|&m| m & set == m) {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&v| set & (1 << v) != 0).collect();
            if find_pseudo_matching(h, &members, &deleted)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
