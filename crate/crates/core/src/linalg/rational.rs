//! Dense elimination over `Q` and fraction-free rank over `Z`.
//!
//! These routines are deliberately naive and serve as independent references
//! for the sparse integer code.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SparseMatrix;

pub type Q = BigRational;

pub fn to_rational(m: &SparseMatrix) -> Vec<Vec<Q>> {
    m.to_dense().into_iter().map(|r| r.into_iter().map(|v| Q::from_integer(v.into())).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut [Vec<Q>]) -> Vec<usize> {
    let n = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, pr);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let sub = &f * &a[r][j];
                a[i][j] -= sub;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<Q>]) -> usize {
    let mut b = a.to_vec();
    rref(&mut b).len()
}

/// Nullspace basis with one vector per free column.
pub fn nullspace(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut b = a.to_vec();
    let pivots = rref(&mut b);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = alloc::vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -b[row][f].clone();
            }
            v
        })
        .collect()
}

/// Product of a dense rational matrix with column vectors `vs`.
pub fn apply(a: &[Vec<Q>], vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    // result has one row per row of `a`, one column per vector
    a.iter()
        .map(|row| {
            vs.iter()
                .map(|v| row.iter().zip(v).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect()
}

/// Fraction-free Bareiss rank of an integer matrix.
pub fn bareiss_rank(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> =
        m.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let (rows, cols) = (a.len(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::invariant_factors;
    use proptest::prelude::*;

    #[test]
    fn nullspace_is_annihilated() {
        let m = SparseMatrix::from_dense(&[alloc::vec![1, 2, 3], alloc::vec![2, 4, 6]]);
        let q = to_rational(&m);
        let ns = nullspace(&q, 3);
        assert_eq!(ns.len(), 2);
        for row in apply(&q, &ns) {
            assert!(row.iter().all(Zero::is_zero));
        }
    }

    proptest! {
        #[test]
        fn three_rank_routines_agree(m in proptest::collection::vec(proptest::collection::vec(-4i64..5, 6), 5)) {
            let s = SparseMatrix::from_dense(&m);
            let r = bareiss_rank(&s);
            prop_assert_eq!(r, rank(&to_rational(&s)));
            prop_assert_eq!(r, invariant_factors(&s).rank());
        }
    }
}
