//! Exact Gaussian elimination over any field implementing [`Field`].
//!
//! Used over Q for cyclotomic inversion and over Q(β) for the Toeplitz and
//! Vandermonde systems of interpolation. No pivoting strategy beyond "first
//! nonzero": arithmetic is exact, so any nonzero pivot is as good as another.

use num_traits::{One, Zero};

use crate::counter;
use crate::error::{dim_err, Error, Result};
use crate::Rational;

/// Minimal field interface needed by elimination.
pub trait Field: Clone + PartialEq {
    fn is_zero_elem(&self) -> bool;
    /// Additive identity of the same field (same context, for Q(β)).
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Field for Rational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        counter::tally(1);
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

fn check_rect<F>(m: &[Vec<F>]) -> Result<usize> {
    let cols = m.first().map_or(0, Vec::len);
    if let Some(bad) = m.iter().find(|row| row.len() != cols) {
        return Err(dim_err(format!("{cols} columns"), format!("{} columns", bad.len())));
    }
    Ok(cols)
}

/// Reduces `m` in place to row echelon form and returns its rank. Pivots
/// are searched only in the first `cols` columns; trailing columns (an
/// augmented right-hand side) are carried along.
fn echelon<F: Field>(m: &mut [Vec<F>], cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero_elem()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][c].inverse().expect("nonzero pivot");
        for r in rank + 1..rows {
            if m[r][c].is_zero_elem() {
                continue;
            }
            let factor = m[r][c].times(&inv);
            let (top, bottom) = m.split_at_mut(r);
            let pivot_row = &top[rank];
            let row = &mut bottom[0];
            for k in c..pivot_row.len() {
                if !pivot_row[k].is_zero_elem() {
                    row[k] = row[k].minus(&factor.times(&pivot_row[k]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a rectangular matrix, computed exactly.
pub fn rank<F: Field>(m: &[Vec<F>]) -> Result<usize> {
    let cols = check_rect(m)?;
    let mut work = m.to_vec();
    Ok(echelon(&mut work, cols))
}

/// Solves the square system `m · x = rhs`.
pub fn solve<F: Field>(m: &[Vec<F>], rhs: &[F]) -> Result<Vec<F>> {
    let n = m.len();
    if rhs.len() != n {
        return Err(dim_err(format!("{n} right-hand entries"), rhs.len()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if check_rect(m)? != n {
        return Err(dim_err(format!("{n}x{n}"), format!("{n}x{}", m[0].len())));
    }
    // augmented matrix
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    if echelon(&mut aug, n) < n {
        return Err(Error::Singular);
    }
    let mut x: Vec<F> = vec![rhs[0].zero_like(); n];
    for i in (0..n).rev() {
        let mut acc = aug[i][n].clone();
        for k in i + 1..n {
            if !aug[i][k].is_zero_elem() {
                acc = acc.minus(&aug[i][k].times(&x[k]));
            }
        }
        x[i] = acc.times(&aug[i][i].inverse().ok_or(Error::Singular)?);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn solves_small_rational_system() {
        // 2x + y = 5, x - y = 1  ->  x = 2, y = 1
        let m = vec![vec![q(2), q(1)], vec![q(1), q(-1)]];
        let x = solve(&m, &[q(5), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    #[test]
    fn needs_row_swap() {
        let m = vec![vec![q(0), q(1)], vec![q(3), q(0)]];
        let x = solve(&m, &[q(4), q(6)]).unwrap();
        assert_eq!(x, vec![q(2), q(4)]);
    }

    #[test]
    fn singular_is_reported() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(solve(&m, &[q(1), q(1)]), Err(Error::Singular));
        assert_eq!(rank(&m).unwrap(), 1);
    }

    #[test]
    fn rank_of_rectangular() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(0), q(1)]];
        assert_eq!(rank(&m).unwrap(), 2);
        let empty: Vec<Vec<Rational>> = vec![];
        assert_eq!(rank(&empty).unwrap(), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let m = vec![vec![q(1), q(2)], vec![q(1)]];
        assert!(matches!(rank(&m), Err(Error::DimensionMismatch { .. })));
    }
}
