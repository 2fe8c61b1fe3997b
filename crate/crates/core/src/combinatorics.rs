//! Small counting and enumeration helpers shared by the search routines.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Lexicographic iterator over the `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(cur);
            }
        }
        Some(cur)
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `binomial` saturated into a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial(n, k).to_u64().unwrap_or(u64::MAX)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of ways to split `blocks * size` labelled items into `blocks`
/// unlabelled blocks of `size` items: `(bs)! / ((s!)^b b!)`.
pub fn equal_block_partitions(blocks: u64, size: u64) -> BigUint {
    factorial(blocks * size) / (factorial(size).pow(blocks as u32) * factorial(blocks))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// A maximum independent set of the graph given by adjacency lists, by
/// branch and bound with a greedy clique-cover bound. Returns sorted vertices.
pub fn maximum_independent_set(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let words = n.div_ceil(64).max(1);
    let mut nbr = vec![vec![0u64; words]; n];
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            if v != u {
                nbr[u][v / 64] |= 1 << (v % 64);
                nbr[v][u / 64] |= 1 << (u % 64);
            }
        }
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut search = MisSearch {
        nbr,
        best: Vec::new(),
        current: Vec::new(),
    };
    search.run(all);
    let mut best = search.best;
    best.sort_unstable();
    best
}

struct MisSearch {
    nbr: Vec<Vec<u64>>,
    best: Vec<usize>,
    current: Vec<usize>,
}

fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

fn first_bit(set: &[u64]) -> Option<usize> {
    bits(set).next()
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

impl MisSearch {
    /// Number of cliques in a greedy clique cover of `set`.
    fn clique_cover(&self, set: &[u64]) -> usize {
        let mut left = set.to_vec();
        let mut cliques = 0;
        while let Some(u) = first_bit(&left) {
            cliques += 1;
            let mut cand: Vec<u64> = left.iter().zip(&self.nbr[u]).map(|(a, b)| a & b).collect();
            left[u / 64] &= !(1 << (u % 64));
            while let Some(w) = first_bit(&cand) {
                left[w / 64] &= !(1 << (w % 64));
                for (c, b) in cand.iter_mut().zip(&self.nbr[w]) {
                    *c &= b;
                }
            }
            for (l, c) in left.iter_mut().zip(cand.iter()) {
                *l &= !c;
            }
        }
        cliques
    }

    fn run(&mut self, mut set: Vec<u64>) {
        // vertices with no neighbour left in `set` can always be taken
        let mut taken = 0;
        loop {
            let free: Vec<usize> = bits(&set)
                .filter(|&v| set.iter().zip(&self.nbr[v]).all(|(a, b)| a & b == 0))
                .collect();
            if free.is_empty() {
                break;
            }
            for v in free {
                set[v / 64] &= !(1 << (v % 64));
                self.current.push(v);
                taken += 1;
            }
        }
        if count(&set) == 0 {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
        } else if self.current.len() + self.clique_cover(&set) > self.best.len() {
            let v = bits(&set)
                .max_by_key(|&v| {
                    set.iter()
                        .zip(&self.nbr[v])
                        .map(|(a, b)| (a & b).count_ones())
                        .sum::<u32>()
                })
                .expect("nonempty");
            let mut with: Vec<u64> = set.iter().zip(&self.nbr[v]).map(|(a, b)| a & !b).collect();
            with[v / 64] &= !(1 << (v % 64));
            self.current.push(v);
            self.run(with);
            self.current.pop();
            set[v / 64] &= !(1 << (v % 64));
            self.run(set);
        }
        self.current.truncate(self.current.len() - taken);
    }
}
