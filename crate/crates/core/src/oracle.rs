//! Slow reference computations used to cross-check the main algorithms:
//! dense rational elimination, open-star component counts and links by
//! coface enumeration. They share no code with the sparse paths.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::extint::Finite;
use crate::perv::Perversity;
use crate::simplex::{Simplex, SimplicialComplex};
use crate::strat::Stratification;

type Matrix = Vec<Vec<BigRational>>;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, r);
        let inv = m[row][c].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[row][k];
                    m[r][k] -= sub;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Rank over Q of a dense integer matrix.
pub fn rank_q(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Matrix = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
    rref(&mut m, cols).len()
}

/// Basis of `{x : m x = 0}` for an `r × cols` matrix.
fn nullspace(mut m: Matrix, cols: usize) -> Matrix {
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

fn rank_of(m: Matrix, cols: usize) -> usize {
    let mut m = m;
    rref(&mut m, cols).len()
}

/// Dense boundary matrix `∂_k` with rows indexed by `(k-1)`-simplices.
fn boundary(complex: &SimplicialComplex, k: usize) -> Vec<Vec<i64>> {
    let rows = if k == 0 { 0 } else { complex.simplices(k - 1).len() };
    let cols = complex.simplices(k).len();
    let mut m = vec![vec![0i64; cols]; rows];
    if k == 0 {
        return m;
    }
    for (j, s) in complex.simplices(k).iter().enumerate() {
        for (face, sign) in s.boundary() {
            m[complex.index_in_dim(&face).unwrap()][j] += sign;
        }
    }
    m
}

fn top_dim(complex: &SimplicialComplex) -> Option<usize> {
    usize::try_from(complex.dim()).ok()
}

/// Betti numbers over Q by dense elimination.
pub fn betti_q(complex: &SimplicialComplex) -> Vec<usize> {
    let Some(n) = top_dim(complex) else { return Vec::new() };
    let ranks: Vec<usize> = (0..=n + 1).map(|k| if k > n { 0 } else { rank_q(&boundary(complex, k)) }).collect();
    (0..=n).map(|k| complex.simplices(k).len() - ranks[k] - ranks[k + 1]).collect()
}

/// Allowability in the classical form `dim(σ ∩ S) <= dim σ - codim S + p(S)`.
pub fn allowable_simplices(strat: &Stratification, p: &Perversity) -> Vec<bool> {
    let poset = strat.poset();
    let complex = strat.complex();
    complex
        .iter()
        .map(|s| {
            poset.singular().all(|st| {
                let meet = s.faces().into_iter().filter(|f| strat.stratum_of_simplex(f).unwrap() == st).map(|f| f.dim()).max();
                match meet {
                    None => true,
                    Some(d) => {
                        let bound = Finite(s.dim() as i64 - poset.codim(st) as i64).checked_add(p.value(st)).unwrap();
                        Finite(d as i64) <= bound
                    }
                }
            })
        })
        .collect()
}

/// Intersection Betti numbers over Q: allowable chains with allowable
/// boundary, found as a subspace kernel, then ranks of `∂` on those bases.
pub fn intersection_betti_q(strat: &Stratification, p: &Perversity) -> Vec<usize> {
    let complex = strat.complex();
    let Some(n) = top_dim(complex) else { return Vec::new() };
    let ok = allowable_simplices(strat, p);
    let allowed = |k: usize| -> Vec<usize> {
        let off = complex.offset(k);
        (0..complex.simplices(k).len()).filter(|&i| ok[off + i]).collect()
    };
    // chain bases in full simplex coordinates, per degree
    let mut bases: Vec<Matrix> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let a = allowed(k);
        let d = boundary(complex, k);
        let bad_rows: Vec<usize> = if k == 0 {
            Vec::new()
        } else {
            let below = allowed(k - 1);
            (0..complex.simplices(k - 1).len()).filter(|r| !below.contains(r)).collect()
        };
        let constraint: Matrix = bad_rows.iter().map(|&r| a.iter().map(|&c| rat(d[r][c])).collect()).collect();
        let kernel = if constraint.is_empty() {
            (0..a.len())
                .map(|i| {
                    let mut v = vec![BigRational::zero(); a.len()];
                    v[i] = BigRational::one();
                    v
                })
                .collect()
        } else {
            nullspace(constraint, a.len())
        };
        let size = complex.simplices(k).len();
        let full: Matrix = kernel
            .into_iter()
            .map(|v| {
                let mut w = vec![BigRational::zero(); size];
                for (i, &c) in a.iter().enumerate() {
                    w[c] = v[i].clone();
                }
                w
            })
            .collect();
        bases.push(full);
    }
    // rank of ∂_k restricted to the chain basis in degree k
    let mut ranks = vec![0usize; n + 2];
    for k in 1..=n {
        let d = boundary(complex, k);
        let rows = complex.simplices(k - 1).len();
        let images: Matrix = bases[k]
            .iter()
            .map(|v| (0..rows).map(|r| v.iter().enumerate().fold(BigRational::zero(), |acc, (c, x)| acc + x * rat(d[r][c]))).collect())
            .collect();
        ranks[k] = rank_of(images, rows);
    }
    (0..=n).map(|k| bases[k].len() - ranks[k] - ranks[k + 1]).collect()
}

/// Components of the regular part, by merging open regular simplices that
/// are faces of one another.
pub fn regular_components_brute(strat: &Stratification) -> usize {
    let complex = strat.complex();
    let regular: Vec<&Simplex> =
        complex.iter().enumerate().filter(|(g, _)| strat.is_regular_simplex(*g)).map(|(_, s)| s).collect();
    let mut parent: Vec<usize> = (0..regular.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..regular.len() {
        for j in i + 1..regular.len() {
            if regular[i].is_face_of(regular[j]) || regular[j].is_face_of(regular[i]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..regular.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Link of `s` from its cofaces: every `τ ⊇ s` contributes `τ ∖ s`.
pub fn link_by_cofaces(complex: &SimplicialComplex, s: &Simplex) -> SimplicialComplex {
    let list = complex.iter().filter(|t| s.is_face_of(t) && *t != s).filter_map(|t| t.difference(s)).collect();
    SimplicialComplex::from_simplices(list)
}

/// Compares links by coface enumeration with the main link routine at every
/// simplex; returns the simplices where they differ.
pub fn link_mismatches(complex: &SimplicialComplex) -> Vec<Simplex> {
    complex
        .iter()
        .filter(|s| {
            let brute = link_by_cofaces(complex, s);
            match complex.link(s) {
                Ok(l) => l != brute,
                Err(_) => !brute.is_empty(),
            }
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_betti() {
        assert_eq!(betti_q(&SimplicialComplex::sphere(2, 0)), [1, 0, 1]);
        assert_eq!(betti_q(&SimplicialComplex::sphere(3, 0)), [1, 0, 0, 1]);
    }

    #[test]
    fn octahedron_edge_link() {
        let oct = SimplicialComplex::sphere(0, 0).join(&SimplicialComplex::sphere(0, 2)).unwrap().join(&SimplicialComplex::sphere(0, 4)).unwrap();
        let l = link_by_cofaces(&oct, &Simplex::new([0, 2]).unwrap());
        assert_eq!(l.f_vector(), [2]);
        assert!(link_mismatches(&oct).is_empty());
    }

    #[test]
    fn trivial_perversity_matches_homology() {
        let s = Stratification::trivial(SimplicialComplex::sphere(2, 0)).unwrap();
        let p = Perversity::zero(s.poset());
        assert_eq!(intersection_betti_q(&s, &p), [1, 0, 1]);
        assert_eq!(regular_components_brute(&s), 1);
    }
}
