use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{simplicial_homology, Group, IhomError, Ring};
use crate::linalg::{invariant_factors, SparseMatrix};
use crate::perv::Perversity;
use crate::simplex::{Simplex, Vertex};
use crate::strat::Stratification;

/// Components of the regular part, which are the `p`-components for `p <= t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0 {
    pub count: usize,
    /// Component label of each regular simplex, in global order.
    pub labels: Vec<Option<usize>>,
}

pub fn pi0_p(strat: &Stratification, p: &Perversity) -> Result<Pi0, IhomError> {
    let poset = strat.poset();
    if p.len() != poset.len() {
        return Err(IhomError::PerversityLength { expected: poset.len(), got: p.len() });
    }
    let top = Perversity::top(poset);
    if let Some(s) = p.first_excess(&top) {
        return Err(IhomError::PerversityTooLarge { stratum: s, value: p.value(s), top: top.value(s) });
    }
    let (labels, count) = strat.regular_components();
    Ok(Pi0 { count, labels })
}

/// A word in the generators; each letter is `(generator, ±1)`.
pub type Word = Vec<(usize, i32)>;

/// Finite presentation of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
    /// Spine vertex used as basepoint (a global simplex index of the space).
    pub basepoint: usize,
    /// First homology of the spine component, for comparison with the abelianization.
    pub spine_h1: Group,
}

impl GroupPresentation {
    /// Rank and torsion of the abelianization.
    pub fn abelianization(&self) -> Group {
        let triples = self.relators.iter().enumerate().flat_map(|(r, w)| w.iter().map(move |&(g, e)| (r, g, e as i64)));
        let m = SparseMatrix::from_triples(self.relators.len(), self.generators, triples);
        let f = invariant_factors(&m);
        Group { rank: self.generators - f.rank(), torsion: f.higher }
    }

    /// Greedy Tietze moves: drop trivial relators and eliminate a generator
    /// whenever some relator contains it exactly once.
    pub fn simplify(&self) -> GroupPresentation {
        const MAX_TOTAL: usize = 20_000;
        let mut gens: Vec<bool> = vec![true; self.generators];
        let mut rels: Vec<Word> = self.relators.iter().map(|w| cyclic_reduce(free_reduce(w.clone()))).collect();
        loop {
            rels.retain(|w| !w.is_empty());
            rels.sort();
            rels.dedup();
            let mut pick: Option<(usize, usize)> = None;
            for (ri, w) in rels.iter().enumerate() {
                for &(g, _) in w {
                    if w.iter().filter(|l| l.0 == g).count() == 1
                        && pick.is_none_or(|(pr, _)| rels[pr].len() > w.len())
                    {
                        pick = Some((ri, g));
                    }
                }
            }
            let Some((ri, g)) = pick else { break };
            let r = rels.remove(ri);
            let pos = r.iter().position(|l| l.0 == g).unwrap();
            let e = r[pos].1;
            // r = u g^e w, so g^e = u^-1 w^-1
            let mut value: Word = inverse(&r[..pos]);
            value.extend(inverse(&r[pos + 1..]));
            if e == -1 {
                value = inverse(&value);
            }
            let total: usize = rels.iter().map(|w| w.len() * value.len().max(1)).sum();
            if total > MAX_TOTAL {
                rels.push(r);
                break;
            }
            for w in rels.iter_mut() {
                let mut out = Vec::with_capacity(w.len());
                for &(h, x) in w.iter() {
                    if h == g {
                        if x == 1 {
                            out.extend_from_slice(&value);
                        } else {
                            out.extend(inverse(&value));
                        }
                    } else {
                        out.push((h, x));
                    }
                }
                *w = cyclic_reduce(free_reduce(out));
            }
            gens[g] = false;
        }
        let renumber: BTreeMap<usize, usize> =
            gens.iter().enumerate().filter(|e| *e.1).enumerate().map(|(new, (old, _))| (old, new)).collect();
        let relators = rels.iter().map(|w| w.iter().map(|&(g, e)| (renumber[&g], e)).collect()).collect();
        GroupPresentation { generators: renumber.len(), relators, basepoint: self.basepoint, spine_h1: self.spine_h1.clone() }
    }

    /// True when the presentation has no generators left.
    pub fn is_visibly_trivial(&self) -> bool {
        self.generators == 0
    }
}

fn inverse(w: &[(usize, i32)]) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

fn free_reduce(w: Word) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for l in w {
        if out.last().is_some_and(|&(g, e)| g == l.0 && e == -l.1) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(mut w: Word) -> Word {
    while w.len() >= 2 {
        let (a, b) = (w[0], w[w.len() - 1]);
        if a.0 == b.0 && a.1 == -b.1 {
            w.pop();
            w.remove(0);
        } else {
            break;
        }
    }
    w
}

/// Edge-path presentation of the fundamental group of the regular part,
/// read off its spine: generators are the edges outside a breadth-first
/// spanning tree, relators come from triangles.
pub fn pi1_regular(strat: &Stratification, basepoint: Option<usize>) -> Result<GroupPresentation, IhomError> {
    let spine = strat.regular_spine();
    if spine.is_empty() {
        return Err(IhomError::EmptySpine);
    }
    let comps = spine.components();
    let comp = match basepoint {
        Some(b) => {
            if !strat.is_regular_simplex(b) {
                return Err(IhomError::SingularBasepoint(b));
            }
            comps.into_iter().find(|c| c.contains(&(b as Vertex))).unwrap()
        }
        None if comps.len() > 1 => return Err(IhomError::DisconnectedSpine(comps.len())),
        None => comps.into_iter().next().unwrap(),
    };
    let base = basepoint.map_or(comp[0], |b| b as Vertex);
    let sub = spine.full_subcomplex(|v| comp.binary_search(&v).is_ok());
    let edges = sub.simplices(1);
    let mut adj: BTreeMap<Vertex, Vec<(Vertex, usize)>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adj.entry(a).or_default().push((b, i));
        adj.entry(b).or_default().push((a, i));
    }
    let mut tree = vec![false; edges.len()];
    let mut seen: BTreeMap<Vertex, ()> = BTreeMap::new();
    let mut queue = VecDeque::from([base]);
    seen.insert(base, ());
    while let Some(v) = queue.pop_front() {
        for &(w, i) in adj.get(&v).map_or(&[][..], |x| &x[..]) {
            if seen.insert(w, ()).is_none() {
                tree[i] = true;
                queue.push_back(w);
            }
        }
    }
    let mut gen_of = vec![usize::MAX; edges.len()];
    let mut generators = 0;
    for (i, t) in tree.iter().enumerate() {
        if !t {
            gen_of[i] = generators;
            generators += 1;
        }
    }
    let letter = |a: Vertex, b: Vertex| -> Option<(usize, i32)> {
        let (lo, hi, e) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let i = sub.index_in_dim(&Simplex::new([lo, hi]).unwrap()).unwrap();
        (!tree[i]).then(|| (gen_of[i], e))
    };
    let relators = if sub.dim() >= 2 {
        sub.simplices(2)
            .iter()
            .map(|t| {
                let v = t.vertices();
                [letter(v[0], v[1]), letter(v[1], v[2]), letter(v[2], v[0])].into_iter().flatten().collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let spine_h1 = simplicial_homology(&sub, Ring::Z).degree(1);
    Ok(GroupPresentation { generators, relators, basepoint: base as usize, spine_h1 })
}
