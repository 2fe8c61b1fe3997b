//! Families of partitions of `[m n]` into blocks of size `m` in which no two
//! members share a union of `k` blocks ("conflictless" families).
//!
//! Algebraic families over a prime `p` use the ground set `Z_p x Z_m`, with
//! the pair `(x, t)` stored as the integer `x + t p`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::combinatorics::{binomial, equal_block_partitions, maximum_independent_set, Combinations};
use crate::construct::BlockPartition;
use crate::error::{capacity, invalid, parse_err, Result};
use crate::hypergraph::Hypergraph;

/// Pairwise distinct partitions of `0..n * m` into `n` blocks of size `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFamily {
    n: usize,
    m: usize,
    members: Vec<BlockPartition>,
}

/// JSON form: `{"n": .., "m": .., "members": [[[block], ..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub n: usize,
    pub m: usize,
    pub members: Vec<Vec<Vec<usize>>>,
}

impl PartitionFamily {
    pub fn new(n: usize, m: usize, members: Vec<BlockPartition>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, p) in members.iter().enumerate() {
            if p.n() != n || p.m() != m {
                return Err(invalid(format!(
                    "member {i} has {} blocks of size {}, expected {n} of size {m}",
                    p.n(),
                    p.m()
                )));
            }
            if !seen.insert(p.canonical()) {
                return Err(invalid(format!("member {i} repeats an earlier partition")));
            }
        }
        Ok(PartitionFamily { n, m, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn members(&self) -> &[BlockPartition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_doc(&self) -> FamilyDoc {
        FamilyDoc {
            n: self.n,
            m: self.m,
            members: self.members.iter().map(|p| p.blocks().to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FamilyDoc =
            serde_json::from_str(text).map_err(|e| parse_err("family", e.to_string()))?;
        let members = doc
            .members
            .into_iter()
            .enumerate()
            .map(|(i, blocks)| {
                BlockPartition::new(doc.m, blocks).map_err(|e| parse_err(format!("members[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        if members.iter().any(|p| p.n() != doc.n) {
            return Err(parse_err("members", format!("every member needs {} blocks", doc.n)));
        }
        Self::new(doc.n, doc.m, members)
    }
}

/// Bitset key of a union of blocks.
fn union_key(blocks: &[Vec<usize>], pick: &[usize], words: usize) -> Vec<u64> {
    let mut key = vec![0u64; words];
    for &i in pick {
        for &x in &blocks[i] {
            key[x / 64] |= 1 << (x % 64);
        }
    }
    key
}

/// True iff no two distinct members have `k` blocks each with equal unions.
pub fn is_conflictless(family: &PartitionFamily, k: usize, budget: &Budget) -> Result<bool> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    let n = family.n();
    if k > n {
        return Ok(true);
    }
    let per_member = binomial(n as u64, k as u64);
    let total = per_member * BigUint::from(family.len());
    if total > BigUint::from(budget.unions) {
        return Err(capacity(format!("{total} block unions exceed the cap of {}", budget.unions)));
    }
    let words = (n * family.m()).div_ceil(64).max(1);
    let mut owner: HashMap<Vec<u64>, usize> = HashMap::new();
    for (idx, p) in family.members().iter().enumerate() {
        for pick in Combinations::new(n, k) {
            if let Some(&other) = owner.get(&union_key(p.blocks(), &pick, words)) {
                if other != idx {
                    return Ok(false);
                }
            } else {
                owner.insert(union_key(p.blocks(), &pick, words), idx);
            }
        }
    }
    Ok(true)
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// The pairings `{(x, 0), (a x + b, 1)}`, `x` in `Z_p`, for `a` in
/// `1..=(p-1)/2` and `b` in `Z_p`, ordered by `(a, b)`.
pub fn prime_pairings(p: usize) -> Result<PartitionFamily> {
    layered_partitions(p, 2, &Budget::default())
}

/// Partitions of `Z_p x Z_m` into the blocks
/// `{(x, 0), (a_1 x + b_1, 1), .., (a_{m-1} x + b_{m-1}, m - 1)}`, one for
/// each tuple of pairs `(a_i, b_i)` in `1..=(p-1)/2` x `Z_p`, in
/// lexicographic order of the tuple.
pub fn layered_partitions(p: usize, m: usize, budget: &Budget) -> Result<PartitionFamily> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let maps: Vec<(usize, usize)> = (1..=(p - 1) / 2)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .collect();
    let size = (maps.len() as u64).checked_pow((m - 1) as u32);
    if size.map_or(true, |s| s > budget.family_size) {
        return Err(capacity(format!(
            "family of size {}^{} exceeds the cap of {}",
            maps.len(),
            m - 1,
            budget.family_size
        )));
    }
    let size = size.expect("checked") as usize;
    let mut members = Vec::with_capacity(size);
    let mut digits = vec![0usize; m - 1];
    for _ in 0..size {
        let blocks = (0..p)
            .map(|x| {
                std::iter::once(x)
                    .chain(digits.iter().enumerate().map(|(t, &d)| {
                        let (a, b) = maps[d];
                        (a * x + b) % p + (t + 1) * p
                    }))
                    .collect()
            })
            .collect();
        members.push(BlockPartition::new(m, blocks)?);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < maps.len() {
                break;
            }
            *d = 0;
        }
    }
    PartitionFamily::new(p, m, members)
}

/// `floor(binom(n m, k m) / binom(n, k))`.
pub fn maxm_upper_bound(n: usize, m: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(invalid(format!("k = {k} exceeds n = {n}")));
    }
    Ok(binomial((n * m) as u64, (k * m) as u64) / binomial(n as u64, k as u64))
}

/// Every partition of `0..n * m` into `n` blocks of size `m`, each block
/// sorted and blocks ordered by their least element.
pub fn all_partitions(n: usize, m: usize, budget: &Budget) -> Result<Vec<BlockPartition>> {
    let count = equal_block_partitions(n as u64, m as u64);
    if count > BigUint::from(budget.partitions) {
        return Err(capacity(format!(
            "{count} partitions exceed the cap of {}",
            budget.partitions
        )));
    }
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut used = vec![false; n * m];
    let mut blocks = Vec::with_capacity(n);
    extend_partitions(m, &mut used, &mut blocks, &mut out)?;
    Ok(out)
}

fn extend_partitions(
    m: usize,
    used: &mut [bool],
    blocks: &mut Vec<Vec<usize>>,
    out: &mut Vec<BlockPartition>,
) -> Result<()> {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(BlockPartition::new(m, blocks.clone())?);
        return Ok(());
    };
    let rest: Vec<usize> = (first + 1..used.len()).filter(|&x| !used[x]).collect();
    for pick in Combinations::new(rest.len(), m - 1) {
        let block: Vec<usize> = std::iter::once(first).chain(pick.iter().map(|&i| rest[i])).collect();
        for &x in &block {
            used[x] = true;
        }
        blocks.push(block);
        extend_partitions(m, used, blocks, out)?;
        for &x in &blocks.pop().expect("pushed") {
            used[x] = false;
        }
    }
    Ok(())
}

/// Exact `MaxM(n, m, k)`: a maximum independent set in the graph whose
/// vertices are all partitions, adjacent when they conflict.
pub fn maxm_bruteforce(n: usize, m: usize, k: usize, budget: &Budget) -> Result<usize> {
    Ok(maxm_family(n, m, k, budget)?.len())
}

/// A largest conflictless family, as found by [`maxm_bruteforce`].
pub fn maxm_family(n: usize, m: usize, k: usize, budget: &Budget) -> Result<PartitionFamily> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let parts = all_partitions(n, m, budget)?;
    let mut adj = vec![Vec::new(); parts.len()];
    if k <= n {
        let words = (n * m).div_ceil(64).max(1);
        let mut holders: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        for (i, p) in parts.iter().enumerate() {
            for pick in Combinations::new(n, k) {
                holders.entry(union_key(p.blocks(), &pick, words)).or_default().push(i);
            }
        }
        for list in holders.values() {
            for (x, &a) in list.iter().enumerate() {
                for &b in &list[x + 1..] {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
    }
    let chosen = maximum_independent_set(&adj);
    PartitionFamily::new(n, m, chosen.into_iter().map(|i| parts[i].clone()).collect())
}

/// Vertices are the `2m`-subsets of `0..n m` in lexicographic order; each
/// partition contributes the edge of its `binom(n, 2)` two-block unions.
/// Requires `n >= 3`; for `n = 2` every partition gives the same edge.
pub fn auxiliary_hypergraph(n: usize, m: usize, budget: &Budget) -> Result<Hypergraph> {
    if n < 3 {
        return Err(invalid("the auxiliary hypergraph needs n >= 3"));
    }
    let ground = n * m;
    if ground > 128 {
        return Err(capacity("ground sets above 128 elements are not supported"));
    }
    let vertices = binomial(ground as u64, 2 * m as u64);
    if vertices > BigUint::from(budget.aux_vertices) {
        return Err(capacity(format!(
            "{vertices} vertices exceed the cap of {}",
            budget.aux_vertices
        )));
    }
    let index: HashMap<u128, usize> = Combinations::new(ground, 2 * m)
        .enumerate()
        .map(|(i, s)| (s.iter().fold(0u128, |acc, &x| acc | 1 << x), i))
        .collect();
    let mask = |b: &[usize]| b.iter().fold(0u128, |acc, &x| acc | 1 << x);
    let edges = all_partitions(n, m, budget)?
        .iter()
        .map(|p| {
            let masks: Vec<u128> = p.blocks().iter().map(|b| mask(b)).collect();
            Combinations::new(n, 2)
                .map(|pair| index[&(masks[pair[0]] | masks[pair[1]])])
                .collect()
        })
        .collect();
    Hypergraph::new(index.len(), n * (n - 1) / 2, edges)
}

/// `binom(2m, m) / 2 * ((n - 2) m)! / ((m!)^(n-2) (n - 2)!)`.
pub fn auxiliary_degree(n: usize, m: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    Ok(binomial(2 * m as u64, m as u64) / BigUint::from(2u32)
        * equal_block_partitions((n - 2) as u64, m as u64))
}

/// A conflictless family (for pairs of blocks) grown greedily from the
/// partitions in a seeded random order, keeping each one whose two-block
/// unions are all new. When there are more partitions than the budget
/// allows, that many random partitions are drawn instead.
pub fn greedy_conflictless(n: usize, m: usize, seed: u64, budget: &Budget) -> Result<PartitionFamily> {
    if n == 0 || m == 0 {
        return Err(invalid("n and m must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = equal_block_partitions(n as u64, m as u64);
    let candidates: Vec<BlockPartition> = if count <= BigUint::from(budget.partitions) {
        let mut all = all_partitions(n, m, budget)?;
        all.shuffle(&mut rng);
        all
    } else {
        let mut ground: Vec<usize> = (0..n * m).collect();
        (0..budget.partitions)
            .map(|_| {
                ground.shuffle(&mut rng);
                let mut blocks: Vec<Vec<usize>> = ground.chunks(m).map(<[usize]>::to_vec).collect();
                for b in &mut blocks {
                    b.sort_unstable();
                }
                blocks.sort_unstable();
                BlockPartition::new(m, blocks)
            })
            .collect::<Result<_>>()?
    };
    let words = (n * m).div_ceil(64).max(1);
    let mut taken: HashSet<Vec<u64>> = HashSet::new();
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut members = Vec::new();
    for p in candidates {
        if !seen.insert(p.canonical()) {
            continue;
        }
        let keys: Vec<Vec<u64>> = if n >= 2 {
            Combinations::new(n, 2).map(|pick| union_key(p.blocks(), &pick, words)).collect()
        } else {
            Vec::new()
        };
        if keys.iter().all(|key| !taken.contains(key)) {
            taken.extend(keys);
            members.push(p);
        }
    }
    PartitionFamily::new(n, m, members)
}
