//! Exact linear algebra over `Z`, `Q` and `F_p`.
//!
//! Machine-word arithmetic is tried first; every integer routine falls back
//! to arbitrary precision when an intermediate value overflows.

mod entry;
pub mod lattice;
pub mod modp;
pub mod rational;
pub mod snf;

use alloc::vec;
use alloc::vec::Vec;

pub(crate) use entry::Entry;
pub use lattice::{integer_kernel, Lattice};
pub use snf::{invariant_factors, InvariantFactors};

/// Raised when an integer result does not fit a machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in exact linear algebra")]
pub struct Overflow;

/// Row-major sparse integer matrix; each row is sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    /// Builds from `(row, col, value)` triples; repeated positions add up.
    pub fn from_triples(rows: usize, cols: usize, triples: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut data: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rows];
        for (r, c, v) in triples {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let triples = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().filter(|e| *e.1 != 0).map(move |(c, &v)| (r, c, v)));
        Self::from_triples(rows.len(), cols, triples)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r].binary_search_by_key(&c, |e| e.0).map_or(0, |i| self.data[r][i].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out[r][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let triples = self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (c, r, v)));
        Self::from_triples(self.cols, self.rows, triples)
    }

    /// Product `self * other`, or `Overflow`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, Overflow> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: alloc::collections::BTreeMap<usize, i64> = alloc::collections::BTreeMap::new();
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    let prod = a.checked_mul(b).ok_or(Overflow)?;
                    let slot = acc.entry(c).or_insert(0);
                    *slot = slot.checked_add(prod).ok_or(Overflow)?;
                }
            }
            data.push(acc.into_iter().filter(|e| e.1 != 0).collect());
        }
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples_merge_and_cancel() {
        let m = SparseMatrix::from_triples(2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, 1), (1, 1, -1)]);
        assert_eq!(m.get(0, 0), 3);
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = a.transpose();
        assert_eq!(a.mul(&b).unwrap().to_dense(), [vec![5, 2], vec![2, 1]]);
        let big = SparseMatrix::from_dense(&[vec![i64::MAX]]);
        assert_eq!(big.mul(&big), Err(Overflow));
    }
}
