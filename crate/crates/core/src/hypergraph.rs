//! Graphs, uniform hypergraphs and vertex weightings.
//!
//! Vertices are dense indices `0..n`. Edges are stored strictly sorted and the
//! edge list itself is kept in lexicographic order, so two hypergraphs with the
//! same edge set compare equal and serialize to identical text.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, parse_err, Error, Result};

/// A `k`-uniform hypergraph on the vertex set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, canonicalising vertex order inside each edge and
    /// the order of the edge list.
    pub fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(invalid("uniformity must be at least 1"));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            validate_edge(n, k, &mut e).map_err(|m| parse_err(format!("edges[{i}]"), m))?;
            canon.push(e);
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Hypergraph { n, k, edges: canon })
    }

    /// The edgeless hypergraph.
    pub fn empty(n: usize, k: usize) -> Self {
        Hypergraph {
            n,
            k: k.max(1),
            edges: Vec::new(),
        }
    }

    /// The complete `k`-uniform hypergraph on `n` vertices.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let edges = crate::combinatorics::Combinations::new(n, k).collect();
        Hypergraph::new(n, k, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &[usize] {
        &self.edges[index]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of `edge` in the canonical edge list.
    pub fn edge_index(&self, edge: &[usize]) -> Option<usize> {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Minimum vertex degree; 0 when some vertex is isolated or `n == 0`.
    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regularity(&self) -> Option<usize> {
        let deg = self.degrees();
        match deg.first() {
            None => Some(0),
            Some(&d) if deg.iter().all(|&x| x == d) => Some(d),
            _ => None,
        }
    }

    /// Number of edges whose weight sum is `>= 0`, compared exactly.
    pub fn nonneg_edge_count(&self, f: &Weighting) -> Result<usize> {
        let scaled = ScaledWeighting::new(self.n, f)?;
        Ok(self.edges.iter().filter(|e| scaled.edge_nonneg(e)).count())
    }

    /// Indices of the edges with nonnegative weight sum.
    pub fn nonneg_edges(&self, f: &Weighting) -> Result<EdgeSet> {
        let scaled = ScaledWeighting::new(self.n, f)?;
        let idx = (0..self.edges.len())
            .filter(|&i| scaled.edge_nonneg(&self.edges[i]))
            .collect();
        Ok(EdgeSet(idx))
    }

    /// Exact weight sum of one edge.
    pub fn edge_sum(&self, index: usize, f: &Weighting) -> Result<BigRational> {
        f.check_len(self.n)?;
        Ok(self.edges[index]
            .iter()
            .fold(BigRational::zero(), |acc, &v| acc + &f.values[v]))
    }

    /// All edges lying entirely inside `vertices`.
    pub fn induced_edge_set(&self, vertices: &[usize]) -> Result<EdgeSet> {
        let mask = self.vertex_mask(vertices)?;
        let idx = (0..self.edges.len())
            .filter(|&i| self.edges[i].iter().all(|&v| mask[v]))
            .collect();
        Ok(EdgeSet(idx))
    }

    /// True iff no edge outside `deleted` lies entirely inside `vertices`.
    pub fn is_independent(&self, vertices: &[usize], deleted: &EdgeSet) -> Result<bool> {
        let inside = self.induced_edge_set(vertices)?;
        Ok(inside.indices().iter().all(|i| deleted.contains(*i)))
    }

    /// The hypergraph with the edges in `deleted` removed.
    pub fn without_edges(&self, deleted: &EdgeSet) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !deleted.contains(*i))
            .map(|(_, e)| e.clone())
            .collect();
        Hypergraph {
            n: self.n,
            k: self.k,
            edges,
        }
    }

    pub(crate) fn vertex_mask(&self, vertices: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in vertices {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} out of range 0..{}", self.n)));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Canonical JSON text: `{"n":..,"k":..,"edges":[[..],..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphDoc::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HypergraphDoc = serde_json::from_str(text).map_err(|e| {
            parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        doc.try_into()
    }
}

fn validate_edge(n: usize, k: usize, e: &mut [usize]) -> std::result::Result<(), String> {
    if e.len() != k {
        return Err(format!("edge has {} vertices, expected {k}", e.len()));
    }
    if let Some(&v) = e.iter().find(|&&v| v >= n) {
        return Err(format!("vertex {v} out of range 0..{n}"));
    }
    e.sort_unstable();
    if e.windows(2).any(|w| w[0] == w[1]) {
        return Err("edge repeats a vertex".to_string());
    }
    Ok(())
}

/// Wire form of a hypergraph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphDoc {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<Vec<usize>>,
}

impl From<&Hypergraph> for HypergraphDoc {
    fn from(h: &Hypergraph) -> Self {
        HypergraphDoc {
            n: h.n,
            k: h.k,
            edges: h.edges.clone(),
        }
    }
}

impl TryFrom<HypergraphDoc> for Hypergraph {
    type Error = Error;

    fn try_from(doc: HypergraphDoc) -> Result<Self> {
        Hypergraph::new(doc.n, doc.k, doc.edges)
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphDoc::from(self).serialize(s)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-uniform hypergraph on {} vertices with {} edges",
            self.k,
            self.n,
            self.edges.len()
        )
    }
}

/// A simple graph: a 2-uniform hypergraph with an adjacency index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    inner: Hypergraph,
    neighbours: Vec<Vec<usize>>,
    words: usize,
    adjacency: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges = edges.into_iter().map(|(u, v)| vec![u, v]).collect();
        Graph::from_hypergraph(Hypergraph::new(n, 2, edges)?)
    }

    pub fn from_hypergraph(h: Hypergraph) -> Result<Self> {
        if h.k != 2 {
            return Err(invalid(format!("expected a graph (k = 2), got k = {}", h.k)));
        }
        let n = h.n;
        let words = n.div_ceil(64).max(1);
        let mut adjacency = vec![0u64; n * words];
        let mut neighbours = vec![Vec::new(); n];
        for e in &h.edges {
            let (u, v) = (e[0], e[1]);
            neighbours[u].push(v);
            neighbours[v].push(u);
            adjacency[u * words + v / 64] |= 1 << (v % 64);
            adjacency[v * words + u / 64] |= 1 << (u % 64);
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        Ok(Graph {
            inner: h,
            neighbours,
            words,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_hypergraph(Hypergraph::empty(n, 2)).expect("k = 2")
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_hypergraph(Hypergraph::complete(n, 2).expect("valid")).expect("k = 2")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid("a cycle needs at least 3 vertices"));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Graph::new(10, outer.chain(inner).chain(spokes)).expect("valid")
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.inner
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.inner
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n
            && v < self.inner.n
            && self.adjacency[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    /// Neighbourhood of `v` as a bitmask; only for graphs with at most 64 vertices.
    pub fn neighbour_mask(&self, v: usize) -> u64 {
        debug_assert!(self.inner.n <= 64);
        self.adjacency[v * self.words]
    }

    /// Edge index of `{u, v}`.
    pub fn edge_index_of(&self, u: usize, v: usize) -> Option<usize> {
        self.inner.edge_index(&[u.min(v), u.max(v)])
    }

    /// The complement graph.
    pub fn complement(&self) -> Graph {
        let n = self.inner.n;
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect::<Vec<_>>();
        Graph::new(n, edges).expect("complement is simple")
    }

    /// True iff the graph is connected (the graph on zero vertices counts as connected).
    pub fn is_connected(&self) -> bool {
        let n = self.inner.n;
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &self.neighbours[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl Deref for Graph {
    type Target = Hypergraph;

    fn deref(&self) -> &Hypergraph {
        &self.inner
    }
}

impl From<Graph> for Hypergraph {
    fn from(g: Graph) -> Self {
        g.inner
    }
}

impl TryFrom<Hypergraph> for Graph {
    type Error = Error;

    fn try_from(h: Hypergraph) -> Result<Self> {
        Graph::from_hypergraph(h)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.inner.serialize(s)
    }
}

/// A set of edges of some host hypergraph, stored as sorted distinct indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(Vec<usize>);

impl EdgeSet {
    pub fn empty() -> Self {
        EdgeSet(Vec::new())
    }

    /// Validates indices against a host with `edge_count` edges.
    pub fn new(mut indices: Vec<usize>, edge_count: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("edge set repeats an index"));
        }
        if let Some(&i) = indices.last().filter(|&&i| i >= edge_count) {
            return Err(invalid(format!("edge index {i} out of range 0..{edge_count}")));
        }
        Ok(EdgeSet(indices))
    }

    /// Looks up each listed edge in `host`.
    pub fn from_edges(host: &Hypergraph, edges: &[Vec<usize>]) -> Result<Self> {
        let idx = edges
            .iter()
            .map(|e| {
                host.edge_index(e)
                    .ok_or_else(|| invalid(format!("{e:?} is not an edge of the host")))
            })
            .collect::<Result<Vec<_>>>()?;
        EdgeSet::new(idx, host.edge_count())
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        EdgeSet(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }

    /// The edges themselves, in index order.
    pub fn edges<'h>(&self, host: &'h Hypergraph) -> Vec<&'h [usize]> {
        self.0.iter().map(|&i| host.edge(i)).collect()
    }
}

/// An exact rational weight per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighting {
    values: Vec<BigRational>,
}

impl Weighting {
    pub fn new(values: Vec<BigRational>) -> Self {
        Weighting { values }
    }

    pub fn zeros(n: usize) -> Self {
        Weighting::new(vec![BigRational::zero(); n])
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Weighting::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// Builds from `(numerator, denominator)` pairs.
    pub fn from_fractions(values: &[(i64, i64)]) -> Result<Self> {
        values
            .iter()
            .map(|&(p, q)| {
                if q == 0 {
                    Err(invalid("zero denominator"))
                } else {
                    Ok(BigRational::new(p.into(), q.into()))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Weighting::new)
    }

    /// One vertex at `1`, every other at `-1/(n-1)`.
    pub fn single_positive(n: usize, positive: usize) -> Self {
        let neg = if n > 1 {
            -BigRational::new(BigInt::one(), BigInt::from(n - 1))
        } else {
            BigRational::zero()
        };
        let values = (0..n)
            .map(|v| if v == positive { BigRational::one() } else { neg.clone() })
            .collect();
        Weighting::new(values)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn scaled(&self, factor: &BigRational) -> Weighting {
        Weighting::new(self.values.iter().map(|v| v * factor).collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// Canonical JSON text: `{"values":["p/q",..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&WeightingDoc::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WeightingDoc = serde_json::from_str(text).map_err(|e| {
            parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        doc.try_into()
    }
}

/// Wire form of a weighting.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightingDoc {
    pub values: Vec<String>,
}

impl From<&Weighting> for WeightingDoc {
    fn from(w: &Weighting) -> Self {
        WeightingDoc {
            values: w.values.iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<WeightingDoc> for Weighting {
    type Error = Error;

    fn try_from(doc: WeightingDoc) -> Result<Self> {
        doc.values
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational(s).map_err(|m| parse_err(format!("values[{i}]"), m)))
            .collect::<Result<Vec<_>>>()
            .map(Weighting::new)
    }
}

impl Serialize for Weighting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightingDoc::from(self).serialize(s)
    }
}

/// Formats a rational as `p/q` with `q > 0`, always including the denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| format!("`{text}` is not a rational p/q"))?;
    let q: BigInt = q.parse().map_err(|_| format!("`{text}` is not a rational p/q"))?;
    if q.is_zero() {
        return Err(format!("`{text}` has a zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

/// A weighting multiplied through by the common denominator. Sign tests on
/// edge sums are unchanged by a positive scale, so counting works on integers.
pub(crate) struct ScaledWeighting {
    small: Option<Vec<i128>>,
    big: Vec<BigInt>,
}

impl ScaledWeighting {
    pub(crate) fn new(n: usize, f: &Weighting) -> Result<Self> {
        f.check_len(n)?;
        let lcm = f
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let big: Vec<BigInt> = f
            .values
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        // Keep headroom so that sums of up to 2^20 terms cannot overflow.
        let limit = BigInt::from(i128::MAX >> 21);
        let small = if big.iter().all(|x| x.abs() <= limit) {
            Some(big.iter().map(|x| x.to_i128().expect("bounded")).collect())
        } else {
            None
        };
        Ok(ScaledWeighting { small, big })
    }

    pub(crate) fn edge_nonneg(&self, e: &[usize]) -> bool {
        match &self.small {
            Some(w) => e.iter().map(|&v| w[v]).sum::<i128>() >= 0,
            None => !e.iter().fold(BigInt::zero(), |acc, &v| acc + &self.big[v]).is_negative(),
        }
    }
}

/// Sorted, deduplicated, range-checked copy of a vertex list.
pub fn vertex_set(n: usize, vertices: &[usize]) -> Result<Vec<usize>> {
    let mut v = vertices.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&x) = v.last().filter(|&&x| x >= n) {
        return Err(invalid(format!("vertex {x} out of range 0..{n}")));
    }
    Ok(v)
}

/// Checks that `parts` contain no common edge; returns the first shared edge.
pub(crate) fn first_shared_edge<'a>(parts: &'a [&'a Hypergraph]) -> Option<&'a [usize]> {
    let mut seen: HashSet<&[usize]> = HashSet::new();
    for h in parts {
        for e in &h.edges {
            if !seen.insert(e.as_slice()) {
                return Some(e);
            }
        }
    }
    None
}
