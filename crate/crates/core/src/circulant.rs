//! Circulant graphs `C_n^{s_1,...,s_k}` on `Z_n` and the MMS criterion for
//! coprime circulants on an odd number of vertices.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::Graph;

/// Modulus and connection set of a circulant graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantSpec {
    pub n: usize,
    pub generators: Vec<usize>,
}

impl CirculantSpec {
    /// Checks `0 < s < n` and that the generators are pairwise distinct.
    pub fn new(n: usize, generators: Vec<usize>) -> Result<Self> {
        let spec = CirculantSpec { n, generators };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &s) in self.generators.iter().enumerate() {
            if s == 0 || s >= self.n {
                return Err(invalid(format!(
                    "generator {s} must lie strictly between 0 and n = {}",
                    self.n
                )));
            }
            if self.generators[..i].contains(&s) {
                return Err(invalid(format!("generator {s} is repeated")));
            }
        }
        Ok(())
    }
}

/// Vertices `Z_n`; `i ~ j` iff `i - j = +-s` for some generator `s`.
pub fn build_circulant(spec: &CirculantSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let mut edges = Vec::new();
    for i in 0..n {
        for &s in &spec.generators {
            let j = (i + s) % n;
            edges.push((i.min(j), i.max(j)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(n, edges)
}

/// `gcd(n, s_i) = 1` for all `i`, and `n` divides no sum `s_i + s_j` of two
/// distinct generators.
pub fn is_coprime_circulant(spec: &CirculantSpec) -> bool {
    let n = spec.n as u64;
    let gens = &spec.generators;
    gens.iter().all(|&s| num_integer::gcd(n, s as u64) == 1)
        && gens.iter().enumerate().all(|(i, &a)| {
            gens[i + 1..].iter().all(|&b| (a + b) % spec.n != 0)
        })
}

/// `min(l, n - l)` for a residue `0 <= l < n`.
pub fn abs_mod(l: usize, n: usize) -> usize {
    debug_assert!(l < n);
    l.min(n - l)
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn mod_inverse(a: usize, n: usize) -> Option<usize> {
    if n == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i128) as usize)
}

/// For an odd-order coprime circulant: true iff no generator `t_i` has
/// `{|t_i^-1 t_j| : j} subset of {1, 3}`.
pub fn circulant_mms_criterion(spec: &CirculantSpec) -> Result<bool> {
    spec.validate()?;
    let n = spec.n;
    if n % 2 == 0 {
        return Err(invalid(format!("criterion needs an odd modulus, got {n}")));
    }
    if !is_coprime_circulant(spec) {
        return Err(invalid("criterion needs a coprime circulant"));
    }
    Ok(spec.generators.iter().all(|&ti| {
        let inv = mod_inverse(ti, n).expect("generators are units");
        !spec
            .generators
            .iter()
            .all(|&tj| matches!(abs_mod(inv * tj % n, n), 1 | 3))
    }))
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Generators of the connected `d`-regular MMS circulant on `n` vertices.
///
/// With `r = d / 2 >= 3` these are the `r` smallest units in
/// `1..=(n - 1) / 2`; their absolute values are distinct, so no generator
/// sees only `{1, 3}`. With `r = 2` they are `{1, k}` for the smallest unit
/// `k` with `|k|` not in `{1, 3}` and `|k^-1| != 3`.
pub fn regular_mms_generators(n: usize, d: usize) -> Result<Vec<usize>> {
    let phi = euler_phi(n as u64) as usize;
    if n % 2 == 0 {
        return Err(invalid(format!("n = {n} must be odd")));
    }
    if phi < 8 {
        return Err(invalid(format!("phi({n}) = {phi} is below 8")));
    }
    if d % 2 != 0 || d < 4 || d > phi {
        return Err(invalid(format!("d = {d} must be even with 4 <= d <= phi({n}) = {phi}")));
    }
    let r = d / 2;
    let units = (1..=(n - 1) / 2).filter(|&u| num_integer::gcd(u, n) == 1);
    let gens: Vec<usize> = if r >= 3 {
        units.take(r).collect()
    } else {
        let k = units
            .filter(|&k| k != 1 && k != 3)
            .find(|&k| abs_mod(mod_inverse(k, n).expect("unit"), n) != 3)
            .ok_or_else(|| Error::Internal(format!("no second generator for n = {n}")))?;
        vec![1, k]
    };
    if gens.len() != r {
        return Err(Error::Internal(format!("only {} units available for r = {r}", gens.len())));
    }
    Ok(gens)
}

/// Connected `d`-regular circulant on `n` vertices satisfying the criterion.
/// Requires `n` odd, `phi(n) >= 8` and `d` even with `4 <= d <= phi(n)`.
pub fn construct_regular_mms(n: usize, d: usize) -> Result<Graph> {
    let spec = CirculantSpec::new(n, regular_mms_generators(n, d)?)?;
    if !circulant_mms_criterion(&spec)? {
        return Err(Error::Internal(format!(
            "generators {:?} fail the criterion",
            spec.generators
        )));
    }
    let g = build_circulant(&spec)?;
    if g.regularity() != Some(d) {
        return Err(Error::Internal(format!("circulant is not {d}-regular")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, g: &[usize]) -> CirculantSpec {
        CirculantSpec::new(n, g.to_vec()).unwrap()
    }

    #[test]
    fn builds_circulants() {
        assert_eq!(build_circulant(&spec(5, &[1])).unwrap(), Graph::cycle(5).unwrap());
        assert_eq!(build_circulant(&spec(7, &[1, 2])).unwrap().regularity(), Some(4));
        assert_eq!(build_circulant(&spec(11, &[1, 2, 3])).unwrap().regularity(), Some(6));
        assert_eq!(build_circulant(&spec(8, &[4])).unwrap().regularity(), Some(1));
        assert!(CirculantSpec::new(5, vec![0]).is_err());
        assert!(CirculantSpec::new(5, vec![5]).is_err());
        assert!(CirculantSpec::new(5, vec![1, 1]).is_err());
    }

    #[test]
    fn coprimality() {
        assert!(!is_coprime_circulant(&spec(9, &[1, 3])));
        assert!(!is_coprime_circulant(&spec(8, &[3, 5])));
        assert!(is_coprime_circulant(&spec(11, &[1, 2, 3])));
    }

    #[test]
    fn number_theory() {
        assert_eq!(abs_mod(4, 7), 3);
        assert_eq!(abs_mod(1, 11), 1);
        assert_eq!(abs_mod(8, 11), 3);
        assert_eq!(euler_phi(11), 10);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(mod_inverse(2, 7), Some(4));
        assert_eq!(mod_inverse(3, 9), None);
    }

    #[test]
    fn criterion_examples() {
        assert!(!circulant_mms_criterion(&spec(7, &[1, 2])).unwrap());
        assert!(circulant_mms_criterion(&spec(11, &[1, 2, 3])).unwrap());
        assert!(!circulant_mms_criterion(&spec(11, &[1, 3])).unwrap());
        assert!(circulant_mms_criterion(&spec(8, &[1, 3])).is_err());
        assert!(circulant_mms_criterion(&spec(9, &[1, 3])).is_err());
    }

    #[test]
    fn regular_constructions() {
        assert_eq!(regular_mms_generators(11, 6).unwrap(), vec![1, 2, 3]);
        assert_eq!(regular_mms_generators(11, 4).unwrap(), vec![1, 2]);
        assert_eq!(regular_mms_generators(15, 4).unwrap(), vec![1, 2]);
        assert_eq!(regular_mms_generators(15, 8).unwrap(), vec![1, 2, 4, 7]);
        for (n, d) in [(11, 4), (11, 6), (11, 10), (15, 4), (15, 8)] {
            let g = construct_regular_mms(n, d).unwrap();
            assert_eq!(g.regularity(), Some(d));
            assert!(g.is_connected());
        }
        assert!(construct_regular_mms(9, 4).is_err());
        assert!(construct_regular_mms(11, 5).is_err());
        assert!(construct_regular_mms(11, 12).is_err());
        assert!(construct_regular_mms(12, 4).is_err());
    }
}
