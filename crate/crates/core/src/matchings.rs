//! Bipartite matchings: Hall violators, the Lebensold inequality and
//! explicit families of edge-disjoint saturating matchings.

use std::collections::VecDeque;

use crate::budget::Budget;
use crate::error::{capacity, invalid, Error, Result};
use crate::hypergraph::{vertex_set, EdgeSet, Graph};

/// Bipartite graph with sides `A` (left) and `B` (right).
///
/// Vertices are addressed by local indices `0..left_len()` and
/// `0..right_len()`; each side also carries the labels of the host vertices
/// it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<usize>,
    right: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Sides labelled `0..left` and `0..right`; `edges` are `(left, right)` pairs.
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); left];
        for &(a, b) in edges {
            if a >= left || b >= right {
                return Err(invalid(format!("edge ({a}, {b}) out of range")));
            }
            adj[a].push(b);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("duplicate bipartite edge"));
            }
        }
        Ok(BipartiteGraph {
            left: (0..left).collect(),
            right: (0..right).collect(),
            adj,
        })
    }

    /// The edges of `g - deleted` running between the disjoint vertex sets
    /// `a` and `b`. Edges inside either side are ignored.
    pub fn from_host(g: &Graph, a: &[usize], b: &[usize], deleted: &EdgeSet) -> Result<Self> {
        let left = vertex_set(g.n(), a)?;
        let right = vertex_set(g.n(), b)?;
        let mut right_pos = vec![usize::MAX; g.n()];
        for (j, &v) in right.iter().enumerate() {
            right_pos[v] = j;
        }
        if left.iter().any(|&v| right_pos[v] != usize::MAX) {
            return Err(invalid("bipartition sides must be disjoint"));
        }
        let adj = left
            .iter()
            .map(|&u| {
                g.neighbours(u)
                    .iter()
                    .filter(|&&v| right_pos[v] != usize::MAX)
                    .filter(|&&v| !deleted.contains(g.edge_index_of(u, v).expect("adjacent")))
                    .map(|&v| right_pos[v])
                    .collect()
            })
            .collect();
        Ok(BipartiteGraph { left, right, adj })
    }

    pub fn left_len(&self) -> usize {
        self.left.len()
    }

    pub fn right_len(&self) -> usize {
        self.right.len()
    }

    pub fn left_label(&self, i: usize) -> usize {
        self.left[i]
    }

    pub fn right_label(&self, j: usize) -> usize {
        self.right[j]
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Edges as local `(left, right)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Maximum matching as `mate_of_left`, via augmenting paths.
    pub fn maximum_matching(&self) -> Vec<Option<usize>> {
        let mut mate_left = vec![None; self.left_len()];
        let mut mate_right = vec![None; self.right_len()];
        for a in 0..self.left_len() {
            let mut seen = vec![false; self.right_len()];
            self.augment(a, &mut seen, &mut mate_left, &mut mate_right);
        }
        mate_left
    }

    fn augment(
        &self,
        a: usize,
        seen: &mut [bool],
        mate_left: &mut [Option<usize>],
        mate_right: &mut [Option<usize>],
    ) -> bool {
        for &b in &self.adj[a] {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            let free = match mate_right[b] {
                None => true,
                Some(other) => self.augment(other, seen, mate_left, mate_right),
            };
            if free {
                mate_left[a] = Some(b);
                mate_right[b] = Some(a);
                return true;
            }
        }
        false
    }
}

/// Host labels of a set `S` of left vertices with `|N(S)| < |S|`, if any.
///
/// `S` is the set of left vertices reachable by alternating paths from the
/// vertices a maximum matching leaves exposed.
pub fn hall_violator(b: &BipartiteGraph) -> Option<Vec<usize>> {
    let mate_left = b.maximum_matching();
    let mut mate_right = vec![None; b.right_len()];
    for (a, m) in mate_left.iter().enumerate() {
        if let Some(r) = m {
            mate_right[*r] = Some(a);
        }
    }
    let mut seen_left = vec![false; b.left_len()];
    let mut seen_right = vec![false; b.right_len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (a, m) in mate_left.iter().enumerate() {
        if m.is_none() {
            seen_left[a] = true;
            queue.push_back(a);
        }
    }
    if queue.is_empty() {
        return None;
    }
    while let Some(a) = queue.pop_front() {
        for &r in b.neighbours(a) {
            if seen_right[r] {
                continue;
            }
            seen_right[r] = true;
            let back = mate_right[r].expect("maximum matching leaves no augmenting path");
            if !seen_left[back] {
                seen_left[back] = true;
                queue.push_back(back);
            }
        }
    }
    let mut s: Vec<usize> = (0..b.left_len())
        .filter(|&a| seen_left[a])
        .map(|a| b.left_label(a))
        .collect();
    s.sort_unstable();
    Some(s)
}

/// `sum over v in B of min(k, |N(v) & S|) >= k |S|` for every `S` of `A`.
pub fn lebensold_check(b: &BipartiteGraph, k: usize, budget: &Budget) -> Result<bool> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let left = b.left_len();
    let limit = budget.lebensold_side.min(40);
    if left > limit {
        return Err(capacity(format!(
            "Lebensold check enumerates 2^{left} subsets; side cap is {limit}"
        )));
    }
    let mut right_masks = vec![0u64; b.right_len()];
    for (a, r) in b.edges() {
        right_masks[r] |= 1 << a;
    }
    for set in 1u64..(1u64 << left) {
        let supply: usize = right_masks
            .iter()
            .map(|&m| ((m & set).count_ones() as usize).min(k))
            .sum();
        if supply < k * set.count_ones() as usize {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `k` edge-disjoint matchings, stored as host-label pairs `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingFamily {
    pub matchings: Vec<Vec<(usize, usize)>>,
}

impl MatchingFamily {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Pairwise edge-disjoint, each a matching of `b`, each covering all of `A`.
    pub fn is_valid_for(&self, b: &BipartiteGraph) -> bool {
        let mut left_pos = std::collections::HashMap::new();
        let mut right_pos = std::collections::HashMap::new();
        for i in 0..b.left_len() {
            left_pos.insert(b.left_label(i), i);
        }
        for j in 0..b.right_len() {
            right_pos.insert(b.right_label(j), j);
        }
        let mut used = std::collections::HashSet::new();
        for m in &self.matchings {
            let mut covered_left = vec![false; b.left_len()];
            let mut covered_right = vec![false; b.right_len()];
            for &(x, y) in m {
                let (Some(&i), Some(&j)) = (left_pos.get(&x), right_pos.get(&y)) else {
                    return false;
                };
                if !b.has_edge(i, j) || covered_left[i] || covered_right[j] || !used.insert((i, j)) {
                    return false;
                }
                covered_left[i] = true;
                covered_right[j] = true;
            }
            if covered_left.iter().any(|c| !c) {
                return false;
            }
        }
        true
    }
}

/// `k` pairwise edge-disjoint matchings of `b`, each saturating `A`, or
/// `None` when they do not exist.
///
/// A max flow (source to `A` with capacity `k`, unit edge arcs, `B` to sink
/// with capacity `k`) selects a subgraph with all `A`-degrees equal to `k`
/// and all `B`-degrees at most `k`; a proper `k`-edge-colouring of that
/// bipartite subgraph splits it into the matchings.
pub fn edge_disjoint_matchings(b: &BipartiteGraph, k: usize) -> Option<MatchingFamily> {
    if k == 0 {
        return Some(MatchingFamily { matchings: Vec::new() });
    }
    let (left, right) = (b.left_len(), b.right_len());
    let edges = b.edges();
    let source = left + right;
    let sink = source + 1;
    let mut net = FlowNetwork::new(sink + 1);
    for a in 0..left {
        net.add_arc(source, a, k);
    }
    let edge_arcs: Vec<usize> = edges
        .iter()
        .map(|&(a, r)| net.add_arc(a, left + r, 1))
        .collect();
    for r in 0..right {
        net.add_arc(left + r, sink, k);
    }
    if net.max_flow(source, sink) < k * left {
        return None;
    }
    let chosen: Vec<(usize, usize)> = edges
        .iter()
        .zip(&edge_arcs)
        .filter(|(_, &arc)| net.flow(arc) == 1)
        .map(|(&e, _)| e)
        .collect();
    let colours = colour_bipartite(left, right, k, &chosen);
    let mut matchings = vec![Vec::new(); k];
    for (&(a, r), &c) in chosen.iter().zip(&colours) {
        matchings[c].push((b.left_label(a), b.right_label(r)));
    }
    for m in &mut matchings {
        m.sort_unstable();
    }
    Some(MatchingFamily { matchings })
}

/// Proper edge colouring with `k` colours of a bipartite graph of maximum
/// degree at most `k`, by alternating-path recolouring.
fn colour_bipartite(left: usize, right: usize, k: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let nodes = left + right;
    // at[v * k + c] = the node joined to v by the edge of colour c
    let mut at: Vec<Option<usize>> = vec![None; nodes * k];
    let free = |at: &[Option<usize>], v: usize| (0..k).find(|&c| at[v * k + c].is_none());
    for &(a, r) in edges {
        let (x, y) = (a, left + r);
        let alpha = free(&at, x).expect("degree at most k");
        let beta = free(&at, y).expect("degree at most k");
        if at[y * k + alpha].is_some() {
            // swap alpha and beta along the alternating path that starts at y
            let mut path = vec![y];
            let mut colour = alpha;
            let mut cur = y;
            while let Some(next) = at[cur * k + colour] {
                path.push(next);
                cur = next;
                colour = if colour == alpha { beta } else { alpha };
            }
            let mut colour = alpha;
            let mut pairs = Vec::with_capacity(path.len());
            for w in path.windows(2) {
                pairs.push((w[0], w[1], colour));
                colour = if colour == alpha { beta } else { alpha };
            }
            for &(u, v, c) in &pairs {
                at[u * k + c] = None;
                at[v * k + c] = None;
            }
            for &(u, v, c) in &pairs {
                let swapped = if c == alpha { beta } else { alpha };
                at[u * k + swapped] = Some(v);
                at[v * k + swapped] = Some(u);
            }
        }
        debug_assert!(at[x * k + alpha].is_none() && at[y * k + alpha].is_none());
        at[x * k + alpha] = Some(y);
        at[y * k + alpha] = Some(x);
    }
    edges
        .iter()
        .map(|&(a, r)| {
            (0..k)
                .find(|&c| at[a * k + c] == Some(left + r))
                .expect("every edge is coloured")
        })
        .collect()
}

struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds an arc and its reverse; returns the forward arc id.
    fn add_arc(&mut self, u: usize, v: usize, cap: usize) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        id
    }

    /// Flow on a forward arc: the residual capacity of its reverse.
    fn flow(&self, arc: usize) -> usize {
        self.cap[arc ^ 1]
    }

    /// Edmonds-Karp.
    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; self.head.len()];
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                for &arc in &self.head[u] {
                    let v = self.to[arc];
                    if self.cap[arc] > 0 && v != s && via[v] == usize::MAX {
                        via[v] = arc;
                        if v == t {
                            reached = true;
                            break;
                        }
                        queue.push_back(v);
                    }
                }
                if reached {
                    break;
                }
            }
            if !reached {
                return total;
            }
            let mut push = usize::MAX;
            let mut v = t;
            while v != s {
                let arc = via[v];
                push = push.min(self.cap[arc]);
                v = self.to[arc ^ 1];
            }
            let mut v = t;
            while v != s {
                let arc = via[v];
                self.cap[arc] -= push;
                self.cap[arc ^ 1] += push;
                v = self.to[arc ^ 1];
            }
            total += push;
        }
    }
}

/// `delta - Delta_A` edge-disjoint matchings between `A` and `N(A) \ A`,
/// each saturating `A`, where `Delta_A` is the maximum degree of `G[A]`.
/// Requires `1 <= |A| <= delta / 2`.
pub fn corollary_matchings(g: &Graph, a: &[usize]) -> Result<MatchingFamily> {
    let a = vertex_set(g.n(), a)?;
    if a.is_empty() {
        return Err(invalid("A must be nonempty"));
    }
    let delta = g.min_degree();
    if 2 * a.len() > delta {
        return Err(invalid(format!(
            "|A| = {} exceeds delta / 2 for delta = {delta}",
            a.len()
        )));
    }
    let mut in_a = vec![false; g.n()];
    for &v in &a {
        in_a[v] = true;
    }
    let inner_max = a
        .iter()
        .map(|&v| g.neighbours(v).iter().filter(|&&u| in_a[u]).count())
        .max()
        .unwrap_or(0);
    let mut outside: Vec<usize> = a
        .iter()
        .flat_map(|&v| g.neighbours(v).iter().copied())
        .filter(|&u| !in_a[u])
        .collect();
    outside.sort_unstable();
    outside.dedup();
    let b = BipartiteGraph::from_host(g, &a, &outside, &EdgeSet::empty())?;
    let k = delta - inner_max;
    edge_disjoint_matchings(&b, k).ok_or_else(|| {
        Error::Internal(format!("no {k} edge-disjoint A-saturating matchings under |A| <= delta/2"))
    })
}
