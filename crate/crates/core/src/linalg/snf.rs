//! Smith normal form invariant factors.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Entry, SparseMatrix};

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InvariantFactors {
    /// How many factors equal 1.
    pub ones: usize,
    /// Factors larger than 1, in divisibility order.
    pub higher: Vec<BigUint>,
}

impl InvariantFactors {
    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        self.ones + self.higher.len()
    }

    /// Rank after reduction modulo the prime `p`.
    pub fn rank_mod(&self, p: u32) -> usize {
        let p = BigUint::from(p);
        self.ones + self.higher.iter().filter(|d| !(*d % &p).is_zero()).count()
    }
}

/// Invariant factors of `m`. Runs in `i64` first and restarts with big
/// integers if any intermediate value overflows.
pub fn invariant_factors(m: &SparseMatrix) -> InvariantFactors {
    match reduce::<i64>(m) {
        Some(f) => f,
        None => reduce::<BigInt>(m).expect("big integers do not overflow"),
    }
}

/// Same as [`invariant_factors`] but always in big integers; exposed for tests.
pub fn invariant_factors_big(m: &SparseMatrix) -> InvariantFactors {
    reduce::<BigInt>(m).expect("big integers do not overflow")
}

type Row<E> = Vec<(usize, E)>;

fn reduce<E: Entry>(m: &SparseMatrix) -> Option<InvariantFactors> {
    let mut rows: Vec<Row<E>> =
        (0..m.rows()).map(|r| m.row(r).iter().map(|&(c, v)| (c, E::from_i64(v))).collect()).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].insert(r);
        }
    }
    let mut ones = 0usize;

    while let Some((pr, pc)) = pick_unit_pivot(&rows, &col_rows) {
        let pivot_row = core::mem::take(&mut rows[pr]);
        let unit = &pivot_row.iter().find(|e| e.0 == pc).unwrap().1;
        let targets: Vec<usize> = col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
        for r in targets {
            let a = &rows[r].iter().find(|e| e.0 == pc).unwrap().1;
            // unit is +-1, so a / unit = a * unit
            let f = a.mul(unit)?;
            let updated = axpy(&rows[r], &f, &pivot_row)?;
            for (c, _) in &pivot_row {
                if updated.binary_search_by_key(c, |e| e.0).is_ok() {
                    col_rows[*c].insert(r);
                } else {
                    col_rows[*c].remove(&r);
                }
            }
            rows[r] = updated;
        }
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&pr);
        }
        ones += 1;
    }

    let live: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let cols: Vec<usize> = (0..col_rows.len()).filter(|&c| !col_rows[c].is_empty()).collect();
    let mut dense: Vec<Vec<E>> = vec![vec![E::zero(); cols.len()]; live.len()];
    for (i, &r) in live.iter().enumerate() {
        for (c, v) in &rows[r] {
            let j = cols.binary_search(c).unwrap();
            dense[i][j] = v.clone();
        }
    }
    let diag = diagonalize(dense)?;
    Some(normalize(ones, diag.iter().map(Entry::to_bigint).collect()))
}

/// Unit entry minimizing the Markowitz fill-in estimate.
fn pick_unit_pivot<E: Entry>(rows: &[Row<E>], col_rows: &[BTreeSet<usize>]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (r, row) in rows.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        let rlen = row.len() - 1;
        if let Some((_, _, s)) = best {
            if rlen > 0 && s == 0 {
                continue;
            }
        }
        for (c, v) in row {
            if !v.is_unit() {
                continue;
            }
            let score = rlen * (col_rows[*c].len() - 1);
            if best.is_none_or(|b| score < b.2) {
                best = Some((r, *c, score));
                if score == 0 {
                    return Some((r, *c));
                }
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

/// `target - f * src` on sorted sparse rows.
fn axpy<E: Entry>(target: &[(usize, E)], f: &E, src: &[(usize, E)]) -> Option<Row<E>> {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        let take_t = j >= src.len() || (i < target.len() && target[i].0 < src[j].0);
        let take_s = i >= target.len() || (j < src.len() && src[j].0 < target[i].0);
        if take_t {
            out.push(target[i].clone());
            i += 1;
        } else if take_s {
            out.push((src[j].0, f.mul(&src[j].1)?.neg()?));
            j += 1;
        } else {
            let v = target[i].1.sub(&f.mul(&src[j].1)?)?;
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Diagonalizes a dense matrix by unimodular row and column operations and
/// returns the nonzero diagonal (not yet in divisibility order).
pub(crate) fn diagonalize<E: Entry>(mut a: Vec<Vec<E>>) -> Option<Vec<E>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs(&a, t..m, t..n) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].quot(&a[t][t])?;
                for j in t..n {
                    let v = a[i][j].sub(&q.mul(&a[t][j])?)?;
                    a[i][j] = v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].quot(&a[t][t])?;
                for row in a.iter_mut().take(m).skip(t) {
                    let v = row[j].sub(&q.mul(&row[t])?)?;
                    row[j] = v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            // move the smallest remainder in row t or column t to the pivot
            let mut best = (t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].cmp_abs(&a[best.0][best.1]).is_lt() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() && a[t][j].cmp_abs(&a[best.0][best.1]).is_lt() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].clone());
    }
    Some(diag)
}

fn min_abs<E: Entry>(
    a: &[Vec<E>],
    rows: core::ops::Range<usize>,
    cols: core::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].cmp_abs(&a[bi][bj]).is_lt()) {
                best = Some((i, j));
                if a[i][j].is_unit() {
                    return best;
                }
            }
        }
    }
    best
}

/// Turns a diagonal into invariant factors by pairwise gcd/lcm exchange.
fn normalize(mut ones: usize, diag: Vec<BigInt>) -> InvariantFactors {
    let mut d: Vec<BigUint> = diag.into_iter().map(|x| x.magnitude().clone()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if (&d[j] % &d[i]).is_zero() {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    let mut higher = Vec::new();
    for x in d {
        if x.is_one() {
            ones += 1;
        } else {
            higher.push(x);
        }
    }
    InvariantFactors { ones, higher }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(rows: &[Vec<i64>]) -> (usize, Vec<u64>) {
        let f = invariant_factors(&SparseMatrix::from_dense(rows));
        (f.ones, f.higher.iter().map(|x| x.iter_u64_digits().next().unwrap_or(0)).collect())
    }

    #[test]
    fn known_forms() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), (1, vec![6]));
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), (0, vec![2, 6, 12]));
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), (0, vec![]));
        assert_eq!(factors(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), (2, vec![2]));
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 2;
        let m = SparseMatrix::from_dense(&[vec![big, big - 1], vec![big - 1, big]]);
        assert_eq!(invariant_factors(&m), invariant_factors_big(&m));
    }

    /// Determinantal-divisor oracle for 2x2 matrices.
    fn oracle_2x2(a: i64, b: i64, c: i64, d: i64) -> Vec<i128> {
        let g = num_integer::gcd(num_integer::gcd(a, b), num_integer::gcd(c, d)) as i128;
        let det = (a as i128 * d as i128 - b as i128 * c as i128).abs();
        match (g, det) {
            (0, _) => vec![],
            (g, 0) => vec![g],
            (g, det) => vec![g, det / g],
        }
    }

    proptest! {
        #[test]
        fn two_by_two_matches_divisors(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let f = invariant_factors(&SparseMatrix::from_dense(&[vec![a, b], vec![c, d]]));
            let mut got: Vec<i128> = vec![1; f.ones];
            got.extend(f.higher.iter().map(|x| x.iter_u64_digits().next().unwrap() as i128));
            prop_assert_eq!(got, oracle_2x2(a, b, c, d));
        }

        #[test]
        fn sparse_and_big_paths_agree(m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 4)) {
            let s = SparseMatrix::from_dense(&m);
            prop_assert_eq!(invariant_factors(&s), invariant_factors_big(&s));
            prop_assert_eq!(invariant_factors(&s), invariant_factors(&s.transpose()));
        }
    }
}
