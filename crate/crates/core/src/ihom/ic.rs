use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{AllowabilityTable, ChainComplex, Homology, IhomError, Ring};
use crate::linalg::modp::{kernel_mod, KernelModP};
use crate::linalg::{integer_kernel, Lattice, SparseMatrix};
use crate::perv::Perversity;
use crate::strat::Stratification;
use crate::unionfind::UnionFind;

/// A sparse chain: `(global simplex index, coefficient)`, sorted by index.
pub type Chain = Vec<(usize, i64)>;

/// Intersection chains with their basis written in simplices.
#[derive(Clone, Debug)]
pub struct IntersectionChains {
    pub complex: ChainComplex,
    /// `basis[k]` lists the degree-`k` generators. Over `F_p` coefficients lie in `0..p`.
    pub basis: Vec<Vec<Chain>>,
}

impl IntersectionChains {
    pub fn homology(&self) -> Homology {
        self.complex.homology()
    }
}

enum Kernel {
    Z(Lattice),
    Fp(KernelModP),
}

/// How to read coordinates off a chain in one degree.
struct Coordinates {
    good: BTreeMap<usize, usize>,
    /// bad simplex -> (block, column within block)
    bad: BTreeMap<usize, (usize, usize)>,
    blocks: Vec<(usize, usize, Kernel)>,
}

/// Allowable chains whose boundary is allowable.
///
/// Allowable simplices with only allowable facets are generators on their
/// own. The remaining allowable simplices contribute the kernel of the map
/// sending a chain to the non-allowable part of its boundary; that map splits
/// into independent blocks, one per group of simplices linked by shared
/// non-allowable facets.
pub fn intersection_chain_complex(strat: &Stratification, p: &Perversity, ring: Ring) -> Result<IntersectionChains, IhomError> {
    let table = AllowabilityTable::new(strat, p)?;
    build(strat, &table, &|_| true, ring)
}

pub fn intersection_homology(strat: &Stratification, p: &Perversity, ring: Ring) -> Result<Homology, IhomError> {
    Ok(intersection_chain_complex(strat, p, ring)?.homology())
}

/// Intersection chains supported on the simplices accepted by `support`,
/// which must form a subcomplex.
pub(crate) fn build(
    strat: &Stratification,
    table: &AllowabilityTable,
    support: &dyn Fn(usize) -> bool,
    ring: Ring,
) -> Result<IntersectionChains, IhomError> {
    let ring = ring.validate()?;
    let complex = strat.complex();
    let modulus = match ring {
        Ring::Fp(p) => Some(p as i64),
        _ => None,
    };
    let reduce = |v: i64| modulus.map_or(v, |p| v.rem_euclid(p));
    let top = complex.dim().max(0) as usize;
    let mut basis: Vec<Vec<Chain>> = Vec::with_capacity(top + 1);
    let mut coords: Vec<Coordinates> = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let offset = complex.offset(k);
        let cands: Vec<usize> = (0..complex.simplices(k).len())
            .map(|i| offset + i)
            .filter(|&g| support(g) && table.is_allowable(g))
            .collect();
        let faces_of = |g: usize| -> Vec<(usize, i64)> {
            complex.simplex(g).boundary().into_iter().map(|(f, s)| (complex.index_of(&f).unwrap(), s)).collect()
        };
        let (good, bad): (Vec<usize>, Vec<usize>) =
            cands.iter().partition(|&&g| faces_of(g).iter().all(|&(f, _)| table.is_allowable(f)));
        let mut deg_basis: Vec<Chain> = good.iter().map(|&g| vec![(g, 1)]).collect();
        let good_map: BTreeMap<usize, usize> = good.iter().enumerate().map(|(i, &g)| (g, i)).collect();

        // group bad simplices by shared non-allowable facets
        let mut uf = UnionFind::new(bad.len());
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &g) in bad.iter().enumerate() {
            for (f, _) in faces_of(g) {
                if !table.is_allowable(f) {
                    match owner.get(&f) {
                        Some(&j) => uf.union(i, j),
                        None => {
                            owner.insert(f, i);
                        }
                    }
                }
            }
        }
        let mut block_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..bad.len() {
            block_members.entry(uf.find(i)).or_default().push(i);
        }
        let mut bad_map = BTreeMap::new();
        let mut blocks = Vec::new();
        let mut next = good.len();
        for members in block_members.values() {
            let b = blocks.len();
            let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
            let mut triples = Vec::new();
            for (c, &i) in members.iter().enumerate() {
                bad_map.insert(bad[i], (b, c));
                for (f, s) in faces_of(bad[i]) {
                    if !table.is_allowable(f) {
                        let n = rows.len();
                        let r = *rows.entry(f).or_insert(n);
                        triples.push((r, c, reduce(s)));
                    }
                }
            }
            let m = SparseMatrix::from_triples(rows.len(), members.len(), triples);
            let kernel = match modulus {
                None => Kernel::Z(integer_kernel(&m)?),
                Some(p) => Kernel::Fp(kernel_mod(&m, p as u32)),
            };
            let vectors: Vec<Vec<i64>> = match &kernel {
                Kernel::Z(l) => l.basis().to_vec(),
                Kernel::Fp(kp) => kp.basis.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect(),
            };
            for v in &vectors {
                let mut chain: Chain =
                    v.iter().enumerate().filter(|e| *e.1 != 0).map(|(c, &x)| (bad[members[c]], x)).collect();
                chain.sort_unstable();
                deg_basis.push(chain);
            }
            blocks.push((next, members.len(), kernel));
            next += vectors.len();
        }
        basis.push(deg_basis);
        coords.push(Coordinates { good: good_map, bad: bad_map, blocks });
    }

    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut boundaries = vec![SparseMatrix::zeros(0, dims[0])];
    for k in 1..=top {
        let mut triples = Vec::new();
        for (j, chain) in basis[k].iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(g, x) in chain {
                for (f, s) in complex.simplex(g).boundary() {
                    let fi = complex.index_of(&f).unwrap();
                    let e = acc.entry(fi).or_insert(0);
                    *e = reduce(e.checked_add(s.checked_mul(x).ok_or(IhomError::Overflow)?).ok_or(IhomError::Overflow)?);
                }
            }
            let co = &coords[k - 1];
            let mut per_block: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
            for (&f, &x) in acc.iter().filter(|e| *e.1 != 0) {
                if let Some(&r) = co.good.get(&f) {
                    triples.push((r, j, x));
                } else if let Some(&(b, c)) = co.bad.get(&f) {
                    per_block.entry(b).or_insert_with(|| vec![0; co.blocks[b].1])[c] = x;
                } else {
                    return Err(IhomError::NotClosed(k - 1));
                }
            }
            for (b, v) in per_block {
                let (start, _, kernel) = &co.blocks[b];
                let cs: Vec<i64> = match kernel {
                    Kernel::Z(l) => l.coordinates(&v).ok_or(IhomError::NotClosed(k - 1))?,
                    Kernel::Fp(kp) => {
                        let w: Vec<u32> = v.iter().map(|&x| x as u32).collect();
                        kp.coordinates(&w).into_iter().map(|x| x as i64).collect()
                    }
                };
                triples.extend(cs.into_iter().enumerate().filter(|e| e.1 != 0).map(|(i, x)| (start + i, j, x)));
            }
        }
        boundaries.push(SparseMatrix::from_triples(dims[k - 1], dims[k], triples));
    }
    let complex = ChainComplex::new(ring, dims, boundaries)?;
    Ok(IntersectionChains { complex, basis })
}
