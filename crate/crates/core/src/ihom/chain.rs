use alloc::vec;
use alloc::vec::Vec;

use super::{Group, Homology, IhomError, Ring};
use crate::linalg::{invariant_factors, modp, InvariantFactors, SparseMatrix};
use crate::simplex::SimplicialComplex;

/// A finite chain complex of free modules. `boundaries[k]` maps degree `k`
/// to degree `k - 1`; `boundaries[0]` has no rows. Over `F_p` the entries
/// are reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ring: Ring,
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Builds and checks `d∘d = 0`.
    pub fn new(ring: Ring, dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self, IhomError> {
        let cc = ChainComplex { ring, dims, boundaries };
        cc.check()?;
        Ok(cc)
    }

    pub fn top(&self) -> usize {
        self.dims.len()
    }

    fn check(&self) -> Result<(), IhomError> {
        for k in 1..self.boundaries.len().saturating_sub(1) {
            let prod = self.boundaries[k].mul(&self.boundaries[k + 1])?;
            let vanishes = match self.ring {
                Ring::Fp(p) => (0..prod.rows()).all(|r| prod.row(r).iter().all(|&(_, v)| v % p as i64 == 0)),
                _ => prod.is_zero(),
            };
            if !vanishes {
                return Err(IhomError::BoundarySquareNonzero(k));
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> Homology {
        let n = self.dims.len();
        let mut degrees = Vec::with_capacity(n);
        match self.ring {
            Ring::Fp(p) => {
                let ranks: Vec<usize> = (0..=n).map(|k| self.boundary(k).map_or(0, |d| modp::rank_mod(d, p))).collect();
                for k in 0..n {
                    degrees.push(Group::free(self.dims[k] - ranks[k] - ranks[k + 1]));
                }
            }
            Ring::Z | Ring::Q => {
                let factors: Vec<InvariantFactors> =
                    (0..=n).map(|k| self.boundary(k).map(invariant_factors).unwrap_or_default()).collect();
                for k in 0..n {
                    let rank = self.dims[k] - factors[k].rank() - factors[k + 1].rank();
                    let torsion = if self.ring == Ring::Z { factors[k + 1].higher.clone() } else { Vec::new() };
                    degrees.push(Group { rank, torsion });
                }
            }
        }
        Homology { ring: self.ring, degrees }
    }

    fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k)
        }
    }
}

/// Oriented simplicial chains with simplices ordered as in the complex.
pub fn simplicial_chain_complex(complex: &SimplicialComplex, ring: Ring) -> Result<ChainComplex, IhomError> {
    let ring = ring.validate()?;
    let top = complex.dim();
    if top < 0 {
        return ChainComplex::new(ring, Vec::new(), Vec::new());
    }
    let top = top as usize;
    let dims: Vec<usize> = (0..=top).map(|k| complex.simplices(k).len()).collect();
    let mut boundaries = vec![SparseMatrix::zeros(0, dims[0])];
    for k in 1..=top {
        let triples = complex.simplices(k).iter().enumerate().flat_map(|(j, s)| {
            s.boundary().into_iter().map(move |(f, sign)| (complex.index_in_dim(&f).unwrap(), j, sign))
        });
        let triples: Vec<(usize, usize, i64)> = match ring {
            Ring::Fp(p) => triples.map(|(r, c, v)| (r, c, v.rem_euclid(p as i64))).collect(),
            _ => triples.collect(),
        };
        boundaries.push(SparseMatrix::from_triples(dims[k - 1], dims[k], triples));
    }
    ChainComplex::new(ring, dims, boundaries)
}

/// Simplicial homology of a complex.
pub fn simplicial_homology(complex: &SimplicialComplex, ring: Ring) -> Homology {
    match simplicial_chain_complex(complex, ring) {
        Ok(cc) => cc.homology(),
        Err(_) => Homology { ring, degrees: Vec::new() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;
    use num_bigint::BigUint;

    /// Six-vertex real projective plane.
    pub(crate) fn rp2() -> SimplicialComplex {
        SimplicialComplex::from_facets([
            [0u32, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [1, 3, 5],
            [2, 4, 5],
        ])
        .unwrap()
    }

    /// Seven-vertex torus.
    pub(crate) fn torus() -> SimplicialComplex {
        let mut f = Vec::new();
        for i in 0..7u32 {
            f.push([i, (i + 1) % 7, (i + 3) % 7]);
            f.push([i, (i + 2) % 7, (i + 3) % 7]);
        }
        SimplicialComplex::from_facets(f).unwrap()
    }

    fn dense_betti(c: &SimplicialComplex) -> Vec<usize> {
        let cc = simplicial_chain_complex(c, Ring::Z).unwrap();
        let n = cc.dims.len();
        let r: Vec<usize> =
            (0..=n).map(|k| if k == 0 || k == n { 0 } else { rational::rank(&rational::to_rational(&cc.boundaries[k])) }).collect();
        (0..n).map(|k| cc.dims[k] - r[k] - r[k + 1]).collect()
    }

    #[test]
    fn standard_spaces() {
        let s2 = SimplicialComplex::sphere(2, 0);
        assert_eq!(simplicial_homology(&s2, Ring::Z).betti(), [1, 0, 1]);
        let h = simplicial_homology(&rp2(), Ring::Z);
        assert_eq!(h.betti(), [1, 0, 0]);
        assert_eq!(h.degrees[1].torsion, [BigUint::from(2u32)]);
        assert_eq!(simplicial_homology(&rp2(), Ring::Fp(2)).betti(), [1, 1, 1]);
        assert_eq!(simplicial_homology(&rp2(), Ring::Q).betti(), [1, 0, 0]);
        assert_eq!(simplicial_homology(&torus(), Ring::Z).betti(), [1, 2, 1]);
        assert_eq!(torus().euler_characteristic(), 0);
    }

    #[test]
    fn dense_oracle_agrees() {
        for c in [rp2(), torus(), SimplicialComplex::sphere(3, 0)] {
            assert_eq!(simplicial_homology(&c, Ring::Q).betti(), dense_betti(&c));
        }
    }

    #[test]
    fn broken_complex_is_rejected() {
        let d1 = SparseMatrix::from_dense(&[vec![1]]);
        let d2 = SparseMatrix::from_dense(&[vec![1]]);
        let r = ChainComplex::new(Ring::Z, vec![1, 1, 1], vec![SparseMatrix::zeros(0, 1), d1, d2]);
        assert_eq!(r, Err(IhomError::BoundarySquareNonzero(1)));
    }
}
