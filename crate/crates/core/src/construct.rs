//! Hypergraph constructions: blowouts, edge-disjoint unions, the regular
//! non-MMS family and the arithmetic for combining regular pieces.

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{first_shared_edge, Graph, Hypergraph};
use crate::partitions::{is_conflictless, PartitionFamily};

/// Ordered blocks of size `m` partitioning `0..m * blocks.len()`.
///
/// In a blowout, block `i` replaces vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// Sorts each block; keeps the block order.
    pub fn new(m: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if m == 0 {
            return Err(invalid("block size must be at least 1"));
        }
        let ground = m * blocks.len();
        let mut seen = vec![false; ground];
        for (i, b) in blocks.iter_mut().enumerate() {
            if b.len() != m {
                return Err(invalid(format!("block {i} has {} elements, expected {m}", b.len())));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x >= ground {
                    return Err(invalid(format!("element {x} outside 0..{ground}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(invalid(format!("element {x} appears in two blocks")));
                }
            }
        }
        Ok(BlockPartition { m, blocks })
    }

    /// Classes `{i + j n : 0 <= j < m}` for `i` in `0..n`.
    pub fn standard(n: usize, m: usize) -> Result<Self> {
        Self::new(m, (0..n).map(|i| (0..m).map(|j| i + j * n).collect()).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Blocks in sorted order, forgetting which vertex each block stands for.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut b = self.blocks.clone();
        b.sort_unstable();
        b
    }
}

/// `H^{+m}`: vertex `i` becomes its class, each edge the union of its classes.
/// Without a partition the classes are `{i + j n}`.
pub fn blowout(h: &Hypergraph, m: usize, partition: Option<&BlockPartition>) -> Result<Hypergraph> {
    let standard;
    let classes = match partition {
        Some(p) => {
            if p.m() != m || p.n() != h.n() {
                return Err(invalid(format!(
                    "partition has {} blocks of size {}, expected {} blocks of size {m}",
                    p.n(),
                    p.m(),
                    h.n()
                )));
            }
            p
        }
        None => {
            standard = BlockPartition::standard(h.n(), m)?;
            &standard
        }
    };
    let edges = h
        .edges()
        .iter()
        .map(|e| e.iter().flat_map(|&i| classes.blocks()[i].iter().copied()).collect())
        .collect();
    Hypergraph::new(m * h.n(), m * h.k(), edges)
}

/// Union of pairwise edge-disjoint hypergraphs on a common vertex set.
pub fn edge_disjoint_union(parts: &[Hypergraph]) -> Result<Hypergraph> {
    let first = parts.first().ok_or_else(|| invalid("union of no hypergraphs"))?;
    for (i, p) in parts.iter().enumerate() {
        if p.n() != first.n() || p.k() != first.k() {
            return Err(invalid(format!(
                "part {i} is a {}-uniform hypergraph on {} vertices, expected {}-uniform on {}",
                p.k(),
                p.n(),
                first.k(),
                first.n()
            )));
        }
    }
    let refs: Vec<&Hypergraph> = parts.iter().collect();
    if let Some(e) = first_shared_edge(&refs) {
        return Err(invalid(format!("edge {e:?} occurs in more than one part")));
    }
    let edges = parts.iter().flat_map(|p| p.edges().iter().cloned()).collect();
    let union = Hypergraph::new(first.n(), first.k(), edges)?;
    let degrees: Option<Vec<usize>> = parts.iter().map(Hypergraph::regularity).collect();
    if let Some(d) = degrees {
        let total: usize = d.iter().sum();
        if union.regularity() != Some(total) {
            return Err(Error::Internal(format!("union of regular parts is not {total}-regular")));
        }
    }
    Ok(union)
}

/// `(2k + 2)`-regular graph on `4k + 1` vertices without the MMS property:
/// the cycle on `0..=2k`, a perfect matching on `2k+1..=4k` and every edge
/// between the two sets.
pub fn counterexample_regular(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let c = 2 * k + 1;
    let n = 4 * k + 1;
    let cycle = (0..c).map(|i| (i, (i + 1) % c));
    let matching = (0..k).map(|i| (c + 2 * i, c + 2 * i + 1));
    let join = (0..c).flat_map(|u| (c..n).map(move |v| (u, v)));
    Graph::new(n, cycle.chain(matching).chain(join))
}

/// Writes `d` as a sum of at most `l` values from `allowed`.
///
/// With `M = max(allowed) / 2` and `d / 2 = qM + r`, the terms are `q`
/// copies of `2M` and then `2r` when `r >= 2`, or `2M` swapped for
/// `2(M - 1), 4` when `r = 1`. If those terms are not all allowed, the
/// shortest decomposition (largest terms first) is searched for instead.
/// `d = 0` gives the empty list; `d = 2` and odd `d` give nothing.
pub fn compose_regularity(d: usize, allowed: &[usize], l: usize) -> Option<Vec<usize>> {
    if d == 0 {
        return Some(Vec::new());
    }
    if d % 2 == 1 || d == 2 {
        return None;
    }
    let mut allowed: Vec<usize> = allowed.iter().copied().filter(|&a| a > 0).collect();
    allowed.sort_unstable_by(|a, b| b.cmp(a));
    allowed.dedup();
    let &top = allowed.first()?;
    if d > l * top {
        return None;
    }
    if let Some(terms) = proof_schedule(d / 2, top / 2) {
        if terms.len() <= l && terms.iter().all(|t| allowed.contains(t)) {
            return Some(terms);
        }
    }
    fewest_terms(d, &allowed).filter(|t| t.len() <= l)
}

fn proof_schedule(s: usize, big: usize) -> Option<Vec<usize>> {
    if big == 0 {
        return None;
    }
    let (q, r) = (s / big, s % big);
    let mut halves = vec![big; q];
    match r {
        0 => {}
        1 => {
            if q == 0 || big < 3 {
                return None;
            }
            halves[q - 1] = big - 1;
            halves.push(2);
        }
        _ => halves.push(r),
    }
    Some(halves.into_iter().map(|h| 2 * h).collect())
}

/// `allowed` sorted in decreasing order.
fn fewest_terms(d: usize, allowed: &[usize]) -> Option<Vec<usize>> {
    let mut best: Vec<Option<usize>> = vec![None; d + 1];
    best[0] = Some(0);
    for total in 1..=d {
        best[total] = allowed
            .iter()
            .filter(|&&a| a <= total)
            .filter_map(|&a| best[total - a].map(|c| c + 1))
            .min();
    }
    best[d]?;
    let mut terms = Vec::new();
    let mut rest = d;
    while rest > 0 {
        let need = best[rest].expect("reachable") - 1;
        let &a = allowed
            .iter()
            .find(|&&a| a <= rest && best[rest - a] == Some(need))
            .expect("a step back exists");
        terms.push(a);
        rest -= a;
    }
    Some(terms)
}

/// Edge-disjoint union of the blowouts of `graphs[i]` over `family[i]`.
/// The family must be conflictless for pairs of blocks, which is exactly
/// what makes the blowouts edge-disjoint.
pub fn blowout_union_from_family(family: &[BlockPartition], graphs: &[Graph]) -> Result<Hypergraph> {
    if family.len() != graphs.len() {
        return Err(invalid(format!(
            "{} partitions but {} graphs",
            family.len(),
            graphs.len()
        )));
    }
    let first = family.first().ok_or_else(|| invalid("empty family"))?;
    let fam = PartitionFamily::new(first.n(), first.m(), family.to_vec())?;
    if !is_conflictless(&fam, 2, &crate::Budget::default())? {
        return Err(invalid("partition family has a conflict"));
    }
    let parts = family
        .iter()
        .zip(graphs)
        .map(|(p, g)| blowout(g, p.m(), Some(p)))
        .collect::<Result<Vec<_>>>()?;
    edge_disjoint_union(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::{build_circulant, CirculantSpec};

    #[test]
    fn blowout_examples() {
        let c4 = blowout(&Graph::cycle(4).unwrap(), 2, None).unwrap();
        assert_eq!((c4.n(), c4.k(), c4.edge_count(), c4.regularity()), (8, 4, 4, Some(2)));
        assert!(c4.edge_index(&[0, 1, 4, 5]).is_some());

        let k11 = blowout(&Graph::complete(11), 2, None).unwrap();
        assert_eq!((k11.n(), k11.k(), k11.edge_count(), k11.regularity()), (22, 4, 55, Some(10)));

        let k3 = Graph::complete(3);
        assert_eq!(&blowout(&k3, 1, None).unwrap(), k3.hypergraph());

        let bad = BlockPartition::standard(3, 2).unwrap();
        assert!(blowout(&Graph::cycle(4).unwrap(), 2, Some(&bad)).is_err());
    }

    #[test]
    fn block_partition_validation() {
        assert!(BlockPartition::new(2, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(BlockPartition::new(2, vec![vec![0, 4], vec![1, 2]]).is_err());
        assert!(BlockPartition::new(2, vec![vec![0], vec![1, 2, 3]]).is_err());
        let p = BlockPartition::new(2, vec![vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 3], vec![0, 2]]);
        assert_eq!(p.canonical(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn unions() {
        let m1 = Graph::new(4, [(0, 1), (2, 3)]).unwrap().into_hypergraph();
        let m2 = Graph::new(4, [(1, 2), (0, 3)]).unwrap().into_hypergraph();
        let c4 = edge_disjoint_union(&[m1.clone(), m2]).unwrap();
        assert_eq!(&c4, Graph::cycle(4).unwrap().hypergraph());
        let err = edge_disjoint_union(&[m1.clone(), m1]).unwrap_err();
        assert!(err.to_string().contains("[0, 1]"));
        assert!(edge_disjoint_union(&[Graph::cycle(4).unwrap().into_hypergraph(), Graph::cycle(5).unwrap().into_hypergraph()]).is_err());
    }

    #[test]
    fn counterexample_shapes() {
        for k in 1..=3 {
            let g = counterexample_regular(k).unwrap();
            assert_eq!(g.n(), 4 * k + 1);
            assert_eq!(g.regularity(), Some(2 * k + 2));
        }
        assert_eq!(counterexample_regular(1).unwrap(), Graph::complete(5));
    }

    #[test]
    fn composition() {
        assert_eq!(compose_regularity(16, &[4, 6, 8, 10], 2), Some(vec![10, 6]));
        assert_eq!(compose_regularity(4, &[4, 8], 1), Some(vec![4]));
        assert_eq!(compose_regularity(22, &[4, 6, 8, 10], 2), None);
        assert_eq!(compose_regularity(2, &[4, 6], 5), None);
        assert_eq!(compose_regularity(7, &[4, 6], 5), None);
        assert_eq!(compose_regularity(0, &[4], 0), Some(vec![]));
        // r = 1 swaps one top term
        assert_eq!(compose_regularity(12, &[4, 6, 8, 10], 2), Some(vec![8, 4]));
        // schedule term 2 * r = 4 not allowed: search instead
        assert_eq!(compose_regularity(14, &[6, 8, 10], 2), Some(vec![8, 6]));
    }

    #[test]
    fn worked_example_union() {
        let p1 = BlockPartition::new(2, (0..11).map(|i| vec![2 * i, 2 * i + 1]).collect()).unwrap();
        let p2 = BlockPartition::new(2, (0..11).map(|i| vec![i, i + 11]).collect()).unwrap();
        let c = build_circulant(&CirculantSpec::new(11, vec![1, 2, 3]).unwrap()).unwrap();
        let h = blowout_union_from_family(&[p1, p2], &[Graph::complete(11), c]).unwrap();
        assert_eq!((h.n(), h.k(), h.regularity()), (22, 4, Some(16)));

        let single = BlockPartition::standard(4, 2).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(
            blowout_union_from_family(std::slice::from_ref(&single), std::slice::from_ref(&c4)).unwrap(),
            blowout(&c4, 2, None).unwrap()
        );
        assert!(blowout_union_from_family(&[single], &[]).is_err());
    }
}
