//! Integer kernels and sublattices of `Z^n` in column echelon form.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{Entry, Overflow, SparseMatrix};

/// A sublattice of `Z^n` with a basis in echelon form: basis vector `i` is
/// zero above row `pivots[i]`, nonzero and positive there, and the pivots
/// strictly increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Integer coordinates of `v` in the basis, or `None` if `v` is not in
    /// the lattice. Arithmetic overflow also yields `None`.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p] % b[p] != 0 {
                return None;
            }
            let c = w[p] / b[p];
            if c != 0 {
                for (x, y) in w.iter_mut().zip(b) {
                    *x = x.checked_sub(c.checked_mul(*y)?)?;
                }
            }
            out.push(c);
        }
        w.iter().all(|&x| x == 0).then_some(out)
    }

    /// Echelon basis of the lattice spanned by `generators`.
    pub fn span(ambient: usize, generators: &[Vec<i64>]) -> Result<Lattice, Overflow> {
        let cols: Vec<Vec<i64>> = generators.to_vec();
        if let Some(l) = echelon::<i64>(ambient, cols) {
            return Ok(l);
        }
        let cols: Vec<Vec<BigInt>> = generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        echelon::<BigInt>(ambient, cols).ok_or(Overflow)
    }
}

/// A basis of `{x in Z^cols : m x = 0}` in echelon form.
pub fn integer_kernel(m: &SparseMatrix) -> Result<Lattice, Overflow> {
    if let Some(l) = kernel::<i64>(m) {
        return Ok(l);
    }
    kernel::<BigInt>(m).ok_or(Overflow)
}

fn kernel<E: Entry>(m: &SparseMatrix) -> Option<Lattice> {
    let (rows, n) = (m.rows(), m.cols());
    let mut cols: Vec<Vec<E>> = (0..n)
        .map(|j| {
            let mut c = vec![E::zero(); rows + n];
            c[rows + j] = E::from_i64(1);
            c
        })
        .collect();
    for r in 0..rows {
        for &(c, v) in m.row(r) {
            cols[c][r] = E::from_i64(v);
        }
    }
    let done = column_reduce(&mut cols, 0..rows)?;
    let kernel: Vec<Vec<E>> = cols.drain(done..).map(|c| c[rows..].to_vec()).collect();
    echelon(n, kernel)
}

fn echelon<E: Entry>(ambient: usize, mut cols: Vec<Vec<E>>) -> Option<Lattice> {
    let mut pivots = Vec::new();
    let mut k = 0;
    for r in 0..ambient {
        let before = k;
        k = column_reduce_row(&mut cols, k, r)?;
        if k > before {
            pivots.push(r);
            if cols[before][r].is_negative() {
                for x in cols[before].iter_mut() {
                    *x = x.neg()?;
                }
            }
        }
    }
    let basis = cols[..k]
        .iter()
        .map(|c| c.iter().map(Entry::to_i64).collect::<Option<Vec<i64>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(Lattice { ambient, basis, pivots })
}

/// Column operations clearing rows `range` in order; returns how many pivot
/// columns were produced. Columns from that index on vanish on `range`.
fn column_reduce<E: Entry>(cols: &mut [Vec<E>], range: core::ops::Range<usize>) -> Option<usize> {
    let mut k = 0;
    for r in range {
        k = column_reduce_row(cols, k, r)?;
    }
    Some(k)
}

/// Euclidean column reduction of row `r` over columns `k..`. If any entry
/// survives it is moved to column `k` and `k + 1` is returned.
fn column_reduce_row<E: Entry>(cols: &mut [Vec<E>], k: usize, r: usize) -> Option<usize> {
    loop {
        let mut best: Option<usize> = None;
        for j in k..cols.len() {
            if !cols[j][r].is_zero() && best.is_none_or(|b| cols[j][r].cmp_abs(&cols[b][r]).is_lt()) {
                best = Some(j);
            }
        }
        let Some(b) = best else { return Some(k) };
        cols.swap(k, b);
        let mut clean = true;
        for j in k + 1..cols.len() {
            if cols[j][r].is_zero() {
                continue;
            }
            let q = cols[j][r].quot(&cols[k][r])?;
            let (head, tail) = cols.split_at_mut(j);
            let pivot = &head[k];
            for (x, y) in tail[0].iter_mut().zip(pivot) {
                *x = x.sub(&q.mul(y)?)?;
            }
            clean &= tail[0][r].is_zero();
        }
        if clean {
            return Some(k + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(m: &SparseMatrix, x: &[i64]) -> Vec<i64> {
        (0..m.rows()).map(|r| m.row(r).iter().map(|&(c, v)| v * x[c]).sum()).collect()
    }

    #[test]
    fn kernel_of_boundary_of_triangle() {
        // edges 01, 02, 12 against vertices 0, 1, 2
        let d = SparseMatrix::from_dense(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let k = integer_kernel(&d).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(apply(&d, &k.basis()[0]).iter().all(|&x| x == 0));
        assert_eq!(k.basis()[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), [1, 1, 1]);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 2y = 0 has kernel generated by (1, 1), not (2, 2)
        let m = SparseMatrix::from_dense(&[vec![2, -2]]);
        let k = integer_kernel(&m).unwrap();
        assert_eq!(k.basis(), [vec![1, 1]]);
        assert_eq!(k.coordinates(&[3, 3]), Some(vec![3]));
        assert_eq!(k.coordinates(&[1, 2]), None);
    }

    #[test]
    fn span_coordinates() {
        let l = Lattice::span(3, &[vec![2, 0, 0], vec![0, 3, 3], vec![2, 3, 3]]).unwrap();
        assert_eq!(l.rank(), 2);
        assert!(l.coordinates(&[4, 6, 6]).is_some());
        assert!(l.coordinates(&[1, 0, 0]).is_none());
    }
}
