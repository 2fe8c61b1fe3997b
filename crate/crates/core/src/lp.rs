//! Exact phase-one simplex for 0/1 covering systems.
//!
//! The solver decides whether `A y = 1, y >= 0` is feasible, where every
//! column of `A` is the 0/1 indicator of a small row set. Either outcome comes
//! with a certificate: a feasible `y`, or a Farkas vector `pi` with
//! `pi . A_j <= 0` for every column and `sum(pi) > 0`.
//!
//! The tableau is kept integral with fraction-free (Bareiss) pivoting, so every
//! entry is a subdeterminant of the input. Arithmetic runs in `i128` and
//! restarts in arbitrary precision if any operation would overflow. Entering
//! and leaving variables follow Bland's rule, which rules out cycling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

/// Result of [`uniform_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    /// Column weights `y >= 0` with `A y = 1`.
    Cover(Vec<BigRational>),
    /// Row multipliers `pi` with `pi . A_j <= 0` for all columns and `sum(pi) > 0`.
    Separator(Vec<BigRational>),
}

/// Solves `A y = 1, y >= 0` for the 0/1 matrix whose `j`-th column has ones
/// exactly at the rows listed in `columns[j]`.
pub fn uniform_cover(rows: usize, columns: &[&[usize]]) -> CoverOutcome {
    match solve::<i128>(rows, columns) {
        Some(out) => out,
        None => solve::<BigInt>(rows, columns).expect("arbitrary precision cannot overflow"),
    }
}

/// Exact check of a [`CoverOutcome`] certificate against its system.
pub fn certificate_holds(rows: usize, columns: &[&[usize]], outcome: &CoverOutcome) -> bool {
    match outcome {
        CoverOutcome::Cover(y) => {
            if y.len() != columns.len() || y.iter().any(|v| v.is_negative()) {
                return false;
            }
            let mut load = vec![BigRational::zero(); rows];
            for (col, w) in columns.iter().zip(y) {
                for &r in *col {
                    load[r] += w;
                }
            }
            load.iter().all(|l| l.is_one())
        }
        CoverOutcome::Separator(pi) => {
            if pi.len() != rows {
                return false;
            }
            let total: BigRational = pi.iter().fold(BigRational::zero(), |a, b| a + b);
            total.is_positive()
                && columns.iter().all(|col| {
                    !col.iter()
                        .fold(BigRational::zero(), |a, &r| a + &pi[r])
                        .is_positive()
                })
        }
    }
}

trait Exact: Clone + Zero + One + PartialOrd + Signed + CheckedMul + CheckedSub + From<i64> {
    fn exact_div(&self, d: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Exact for i128 {
    fn exact_div(&self, d: &Self) -> Self {
        debug_assert_eq!(self % d, 0);
        self / d
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn solve<T: Exact>(rows: usize, columns: &[&[usize]]) -> Option<CoverOutcome> {
    let q = columns.len();
    let width = q + rows + 1;
    let rhs = width - 1;
    // rows 0..rows are constraints, row `rows` is the phase-one objective
    let mut t = vec![T::zero(); (rows + 1) * width];
    let at = |i: usize, j: usize| i * width + j;
    for (j, col) in columns.iter().enumerate() {
        for &r in *col {
            t[at(r, j)] = T::one();
        }
    }
    for i in 0..rows {
        t[at(i, q + i)] = T::one();
        t[at(i, rhs)] = T::one();
    }
    let obj = rows;
    for j in 0..q {
        t[at(obj, j)] = -T::from(columns[j].len() as i64);
    }
    t[at(obj, rhs)] = -T::from(rows as i64);

    let mut basis: Vec<usize> = (q..q + rows).collect();
    let mut denom = T::one();

    loop {
        let Some(enter) = (0..q + rows).find(|&j| t[at(obj, j)].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..rows {
            let a = &t[at(i, enter)];
            if !a.is_positive() {
                continue;
            }
            match leave {
                None => leave = Some(i),
                Some(l) => {
                    // compare rhs_i / a_i with rhs_l / a_l
                    let lhs = t[at(i, rhs)].checked_mul(&t[at(l, enter)])?;
                    let rhs_v = t[at(l, rhs)].checked_mul(a)?;
                    if lhs < rhs_v || (lhs == rhs_v && basis[i] < basis[l]) {
                        leave = Some(i);
                    }
                }
            }
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let r = leave.expect("phase-one objective is bounded");
        let p = t[at(r, enter)].clone();
        for i in 0..=rows {
            if i == r {
                continue;
            }
            let factor = t[at(i, enter)].clone();
            for j in 0..width {
                let a = t[at(i, j)].checked_mul(&p)?;
                let b = factor.checked_mul(&t[at(r, j)])?;
                t[at(i, j)] = a.checked_sub(&b)?.exact_div(&denom);
            }
        }
        denom = p;
        basis[r] = enter;
    }

    let d = denom.to_big();
    let ratio = |x: &T| BigRational::new(x.to_big(), d.clone());
    if t[at(obj, rhs)].is_zero() {
        let mut y = vec![BigRational::zero(); q];
        for (i, &b) in basis.iter().enumerate() {
            if b < q {
                y[b] = ratio(&t[at(i, rhs)]);
            }
        }
        Some(CoverOutcome::Cover(y))
    } else {
        let pi = (0..rows)
            .map(|i| BigRational::one() - ratio(&t[at(obj, q + i)]))
            .collect();
        Some(CoverOutcome::Separator(pi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(v: &[Vec<usize>]) -> Vec<&[usize]> {
        v.iter().map(Vec::as_slice).collect()
    }

    #[test]
    fn even_cycle_has_a_perfect_cover() {
        let c4 = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let out = uniform_cover(4, &cols(&c4));
        assert!(matches!(out, CoverOutcome::Cover(_)));
        assert!(certificate_holds(4, &cols(&c4), &out));
    }

    #[test]
    fn path_on_three_vertices_has_no_cover() {
        let p3 = vec![vec![0, 1], vec![1, 2]];
        let out = uniform_cover(3, &cols(&p3));
        assert!(matches!(out, CoverOutcome::Separator(_)));
        assert!(certificate_holds(3, &cols(&p3), &out));
    }

    #[test]
    fn odd_cycle_has_half_integral_cover() {
        let c5: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5]).collect();
        match uniform_cover(5, &cols(&c5)) {
            CoverOutcome::Cover(y) => {
                let half = BigRational::new(1.into(), 2.into());
                assert!(y.iter().all(|v| *v == half));
            }
            other => panic!("expected a cover, got {other:?}"),
        }
    }

    #[test]
    fn isolated_row_is_infeasible() {
        let out = uniform_cover(3, &cols(&[vec![0, 1]]));
        assert!(certificate_holds(3, &cols(&[vec![0, 1]]), &out));
        assert!(matches!(out, CoverOutcome::Separator(_)));
        assert!(matches!(uniform_cover(0, &[]), CoverOutcome::Cover(_)));
    }

    #[test]
    fn big_integer_path_agrees_with_i128() {
        let star: Vec<Vec<usize>> = (1..6).map(|i| vec![0, i]).chain([vec![1, 2, 3]]).collect();
        let a = solve::<i128>(6, &cols(&star)).unwrap();
        let b = solve::<BigInt>(6, &cols(&star)).unwrap();
        assert_eq!(a, b);
        assert!(certificate_holds(6, &cols(&star), &a));
    }
}
