//! Linear algebra over the prime field `F_p`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::SparseMatrix;

fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

fn inverse(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and small
    let (mut base, mut exp, mut acc) = (a as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Rank of `m` modulo `p`, by sparse leading-column reduction.
pub fn rank_mod(m: &SparseMatrix, p: u32) -> usize {
    let mut pivots: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
    for r in 0..m.rows() {
        let mut row: Vec<(usize, u32)> =
            m.row(r).iter().map(|&(c, v)| (c, reduce(v, p))).filter(|e| e.1 != 0).collect();
        while let Some(&(lead, a)) = row.first() {
            match pivots.get(&lead) {
                Some(piv) => row = sub_scaled(&row, a, piv, p),
                None => {
                    let inv = inverse(a, p);
                    row.iter_mut().for_each(|e| e.1 = (e.1 as u64 * inv as u64 % p as u64) as u32);
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `row - f * piv` modulo `p` for sorted sparse rows.
fn sub_scaled(row: &[(usize, u32)], f: u32, piv: &[(usize, u32)], p: u32) -> Vec<(usize, u32)> {
    let p64 = p as u64;
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        if j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
            out.push(row[i]);
            i += 1;
        } else if i >= row.len() || piv[j].0 < row[i].0 {
            let v = (p64 - f as u64 * piv[j].1 as u64 % p64) % p64;
            out.push((piv[j].0, v as u32));
            j += 1;
        } else {
            let v = (row[i].1 as u64 + p64 - f as u64 * piv[j].1 as u64 % p64) % p64;
            if v != 0 {
                out.push((row[i].0, v as u32));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Kernel of a matrix over `F_p` from its reduced row echelon form.
///
/// Basis vector `i` is 1 at `free[i]` and 0 at every other free column, so
/// the coordinates of a kernel vector are its entries at the free columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelModP {
    pub basis: Vec<Vec<u32>>,
    pub free: Vec<usize>,
}

impl KernelModP {
    pub fn coordinates(&self, v: &[u32]) -> Vec<u32> {
        self.free.iter().map(|&c| v[c]).collect()
    }
}

pub fn kernel_mod(m: &SparseMatrix, p: u32) -> KernelModP {
    let n = m.cols();
    let mut a: Vec<Vec<u32>> = (0..m.rows())
        .map(|r| {
            let mut row = vec![0u32; n];
            for &(c, v) in m.row(r) {
                row[c] = reduce(v, p);
            }
            row
        })
        .collect();
    let p64 = p as u64;
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = inverse(a[r][c], p) as u64;
        a[r].iter_mut().for_each(|x| *x = (*x as u64 * inv % p64) as u32);
        for i in 0..a.len() {
            if i == r || a[i][c] == 0 {
                continue;
            }
            let f = a[i][c] as u64;
            for j in 0..n {
                let sub = f * a[r][j] as u64 % p64;
                a[i][j] = ((a[i][j] as u64 + p64 - sub) % p64) as u32;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = ((p64 - a[row][f] as u64) % p64) as u32;
            }
            v
        })
        .collect();
    KernelModP { basis, free }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_depends_on_characteristic() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank_mod(&m, 2), 2);
        assert_eq!(rank_mod(&m, 3), 3);
    }

    #[test]
    fn kernel_vectors_vanish() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0, 2], vec![0, 1, 1, 1]]);
        for p in [2u32, 3, 5, 97] {
            let k = kernel_mod(&m, p);
            assert_eq!(k.basis.len(), 4 - rank_mod(&m, p));
            for v in &k.basis {
                for r in 0..m.rows() {
                    let s: i64 = m.row(r).iter().map(|&(c, x)| x * v[c] as i64).sum();
                    assert_eq!(s.rem_euclid(p as i64), 0);
                }
                assert_eq!(k.coordinates(v).iter().filter(|&&x| x == 1).count(), 1);
            }
        }
    }

    #[test]
    fn inverses() {
        for a in 1..97u32 {
            assert_eq!(a * inverse(a, 97) % 97, 1);
        }
    }
}
