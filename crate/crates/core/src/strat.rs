//! Filtrations of a simplicial complex by closed subcomplexes.
//!
//! A stratification is stored as one *level* per simplex: the least `i` with
//! the simplex inside the skeleton `X_i`. Strata are the connected pieces of
//! each level under the codimension-one face relation, numbered by
//! `(level, least simplex)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::ihom::{simplicial_homology, Homology, Ring};
use crate::simplex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StratError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("skeleton {lower} is not contained in skeleton {upper}")]
    NotNested { lower: usize, upper: usize },
    #[error("skeleton {index} lists {simplex}, which is not a simplex of the complex")]
    SkeletonNotSubcomplex { index: usize, simplex: Simplex },
    #[error("skeleton {index} contains {simplex} of larger dimension")]
    SkeletonTooLarge { index: usize, simplex: Simplex },
    #[error("skeleton index {index} exceeds formal dimension {formal_dim}")]
    SkeletonIndexOutOfRange { index: usize, formal_dim: usize },
    #[error("top skeleton must be the whole complex")]
    TopSkeletonNotTotal,
    #[error("formal dimension {formal_dim} is below the complex dimension {dim}")]
    FormalDimTooSmall { formal_dim: usize, dim: isize },
    #[error("the singular set is the whole complex")]
    SingularEqualsTotal,
    #[error("face {face} has a larger level than {simplex}")]
    LevelsNotMonotone { face: Simplex, simplex: Simplex },
    #[error("expected {expected} levels, got {got}")]
    LevelCountMismatch { expected: usize, got: usize },
    #[error("the stratifications live on different complexes")]
    DifferentComplex,
    #[error("the selection misses the regular part")]
    EmptyIntersectionWithRegularPart,
    #[error("{{{0}}} is already a stratum")]
    AlreadyAPointStratum(Vertex),
    #[error("{0} lies in a regular stratum")]
    RegularSimplex(Simplex),
    #[error("{0} has an empty link")]
    EmptyLink(Simplex),
    #[error("the empty complex cannot be stratified")]
    EmptyComplex,
}

/// Closure order on strata, shared by triangulated and symbolic spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataPoset {
    pub formal_dim: usize,
    /// Formal dimension of each stratum.
    pub dims: Vec<usize>,
    /// `le[a][b]` holds when stratum `a` lies in the closure of stratum `b`.
    le: Vec<Vec<bool>>,
    depth: usize,
}

impl StrataPoset {
    /// Builds a poset from a reflexive relation; the caller guarantees
    /// antisymmetry and transitivity.
    pub fn new(formal_dim: usize, dims: Vec<usize>, le: Vec<Vec<bool>>) -> Self {
        let depth = longest_chain(&le);
        StrataPoset { formal_dim, dims, le, depth }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn codim(&self, s: usize) -> usize {
        self.formal_dim - self.dims[s]
    }

    pub fn is_regular(&self, s: usize) -> bool {
        self.dims[s] == self.formal_dim
    }

    pub fn singular(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&s| !self.is_regular(s))
    }

    /// Depth of the subposet on `members`.
    pub fn sub_depth(&self, members: &[usize]) -> usize {
        let le: Vec<Vec<bool>> =
            members.iter().map(|&a| members.iter().map(|&b| self.le[a][b]).collect()).collect();
        longest_chain(&le)
    }
}

fn longest_chain(le: &[Vec<bool>]) -> usize {
    let n = le.len();
    let mut memo: Vec<Option<usize>> = vec![None; n];
    fn up(a: usize, le: &[Vec<bool>], memo: &mut [Option<usize>]) -> usize {
        if let Some(v) = memo[a] {
            return v;
        }
        let mut best = 0;
        for b in 0..le.len() {
            if b != a && le[a][b] {
                best = best.max(1 + up(b, le, memo));
            }
        }
        memo[a] = Some(best);
        best
    }
    (0..n).map(|a| up(a, le, &mut memo)).max().unwrap_or(0)
}

/// One stratum: a connected set of simplices sharing a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub id: usize,
    pub dim: usize,
    /// Global simplex indices, ascending.
    pub simplices: Vec<usize>,
}

/// Violation of the closure properties expected of a stratified space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrontierAnomaly {
    /// `a` meets the closure of `b` without lying inside it.
    PartialClosure { a: usize, b: usize },
    /// `a < b` but `dim a >= dim b`.
    DimensionOrder { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    complex: SimplicialComplex,
    formal_dim: usize,
    levels: Vec<usize>,
    strata: Vec<Stratum>,
    stratum_of: Vec<usize>,
    poset: StrataPoset,
    anomalies: Vec<FrontierAnomaly>,
}

impl Stratification {
    /// Builds from explicit skeleta `(i, facets of X_i)` for `i < n`.
    /// An omitted index inherits the skeleton below it; `X_n` is the complex.
    pub fn new(
        complex: SimplicialComplex,
        formal_dim: usize,
        skeleta: &[(usize, Vec<Simplex>)],
    ) -> Result<Self, StratError> {
        if complex.is_empty() {
            return Err(StratError::EmptyComplex);
        }
        if (formal_dim as isize) < complex.dim() {
            return Err(StratError::FormalDimTooSmall { formal_dim, dim: complex.dim() });
        }
        let mut sorted: Vec<&(usize, Vec<Simplex>)> = skeleta.iter().collect();
        sorted.sort_by_key(|s| s.0);
        let mut subs: Vec<(usize, SimplicialComplex)> = Vec::new();
        for (index, facets) in sorted {
            if *index > formal_dim {
                return Err(StratError::SkeletonIndexOutOfRange { index: *index, formal_dim });
            }
            for f in facets {
                if !complex.contains(f) {
                    return Err(StratError::SkeletonNotSubcomplex { index: *index, simplex: f.clone() });
                }
            }
            let sub = SimplicialComplex::from_simplices(facets.clone());
            if *index == formal_dim {
                if sub != complex {
                    return Err(StratError::TopSkeletonNotTotal);
                }
                continue;
            }
            if let Some((lower, prev)) = subs.last() {
                if *lower == *index || !prev.is_subcomplex_of(&sub) {
                    return Err(StratError::NotNested { lower: *lower, upper: *index });
                }
            }
            subs.push((*index, sub));
        }
        let mut levels = vec![formal_dim; complex.num_simplices()];
        for (g, s) in complex.iter().enumerate() {
            if let Some((i, _)) = subs.iter().find(|(_, sub)| sub.contains(s)) {
                levels[g] = *i;
            }
        }
        Self::from_levels(complex, formal_dim, levels)
    }

    /// Builds from one level per simplex (global order).
    pub fn from_levels(complex: SimplicialComplex, formal_dim: usize, levels: Vec<usize>) -> Result<Self, StratError> {
        if complex.is_empty() {
            return Err(StratError::EmptyComplex);
        }
        if levels.len() != complex.num_simplices() {
            return Err(StratError::LevelCountMismatch { expected: complex.num_simplices(), got: levels.len() });
        }
        if (formal_dim as isize) < complex.dim() {
            return Err(StratError::FormalDimTooSmall { formal_dim, dim: complex.dim() });
        }
        for (g, s) in complex.iter().enumerate() {
            if levels[g] > formal_dim {
                return Err(StratError::SkeletonIndexOutOfRange { index: levels[g], formal_dim });
            }
            if s.dim() > levels[g] {
                return Err(StratError::SkeletonTooLarge { index: levels[g], simplex: s.clone() });
            }
            for (face, _) in s.boundary() {
                let f = complex.index_of(&face).expect("complexes are face closed");
                if levels[f] > levels[g] {
                    return Err(StratError::LevelsNotMonotone { face, simplex: s.clone() });
                }
            }
        }
        if !levels.contains(&formal_dim) {
            return Err(StratError::SingularEqualsTotal);
        }

        let n = complex.num_simplices();
        let mut uf = UnionFind::new(n);
        for (g, s) in complex.iter().enumerate() {
            for (face, _) in s.boundary() {
                let f = complex.index_of(&face).unwrap();
                if levels[f] == levels[g] {
                    uf.union(f, g);
                }
            }
        }
        // number strata by (level, least simplex)
        let mut rep_least: BTreeMap<usize, usize> = BTreeMap::new();
        for g in 0..n {
            let r = uf.find(g);
            let best = rep_least.entry(r).or_insert(g);
            if complex.simplex(g) < complex.simplex(*best) {
                *best = g;
            }
        }
        let mut order: Vec<(usize, usize)> = rep_least.iter().map(|(&r, &least)| (r, least)).collect();
        order.sort_by(|a, b| (levels[a.1], complex.simplex(a.1)).cmp(&(levels[b.1], complex.simplex(b.1))));
        let mut id_of_rep: BTreeMap<usize, usize> = BTreeMap::new();
        let mut strata: Vec<Stratum> = Vec::with_capacity(order.len());
        for (id, (r, least)) in order.iter().enumerate() {
            id_of_rep.insert(*r, id);
            strata.push(Stratum { id, dim: levels[*least], simplices: Vec::new() });
        }
        let mut stratum_of = vec![0; n];
        for g in 0..n {
            let id = id_of_rep[&uf.find(g)];
            stratum_of[g] = id;
            strata[id].simplices.push(g);
        }

        let (poset, anomalies) = closure_poset(&complex, formal_dim, &strata, &stratum_of);
        Ok(Stratification { complex, formal_dim, levels, strata, stratum_of, poset, anomalies })
    }

    /// The trivial filtration with formal dimension `dim X`.
    pub fn trivial(complex: SimplicialComplex) -> Result<Self, StratError> {
        let n = complex.dim().max(0) as usize;
        let levels = vec![n; complex.num_simplices()];
        Self::from_levels(complex, n, levels)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn formal_dim(&self) -> usize {
        self.formal_dim
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, global: usize) -> usize {
        self.levels[global]
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum_of(&self, global: usize) -> usize {
        self.stratum_of[global]
    }

    pub fn poset(&self) -> &StrataPoset {
        &self.poset
    }

    pub fn depth(&self) -> usize {
        self.poset.depth()
    }

    pub fn anomalies(&self) -> &[FrontierAnomaly] {
        &self.anomalies
    }

    pub fn is_regular_simplex(&self, global: usize) -> bool {
        self.levels[global] == self.formal_dim
    }

    /// Least `i` with `s` in `X_i`.
    pub fn carrier_index(&self, s: &Simplex) -> Result<usize, StratError> {
        let g = self.complex.index_of(s).ok_or_else(|| ComplexError::NotASimplex(s.clone()))?;
        Ok(self.levels[g])
    }

    pub fn stratum_of_simplex(&self, s: &Simplex) -> Result<usize, StratError> {
        let g = self.complex.index_of(s).ok_or_else(|| ComplexError::NotASimplex(s.clone()))?;
        Ok(self.stratum_of[g])
    }

    /// Least simplex of a stratum, used to name it.
    pub fn representative(&self, stratum: usize) -> &Simplex {
        self.strata[stratum].simplices.iter().map(|&g| self.complex.simplex(g)).min().unwrap()
    }

    /// The subcomplex `X_i`.
    pub fn skeleton(&self, i: usize) -> SimplicialComplex {
        self.complex.filter_closed(|s| self.levels[self.complex.index_of(s).unwrap()] <= i)
    }

    /// Indices `i < n` where the skeleton grows, with the facets of `X_i`.
    pub fn skeleta(&self) -> Vec<(usize, Vec<Simplex>)> {
        let mut out = Vec::new();
        for i in 0..self.formal_dim {
            if self.levels.contains(&i) {
                out.push((i, self.skeleton(i).facets().to_vec()));
            }
        }
        out
    }

    /// The singular subcomplex `X_{n-1}`.
    pub fn singular_set(&self) -> SimplicialComplex {
        if self.formal_dim == 0 {
            return SimplicialComplex::empty();
        }
        self.skeleton(self.formal_dim - 1)
    }

    /// Stratum map of a coarsening, or `None` when `coarse` is not one.
    pub fn coarsening_map(&self, coarse: &Stratification) -> Result<Option<Vec<usize>>, StratError> {
        if self.complex != coarse.complex {
            return Err(StratError::DifferentComplex);
        }
        if self.formal_dim != coarse.formal_dim {
            return Ok(None);
        }
        let mut map = vec![usize::MAX; self.strata.len()];
        for (g, &s) in self.stratum_of.iter().enumerate() {
            let t = coarse.stratum_of[g];
            if map[s] == usize::MAX {
                map[s] = t;
            } else if map[s] != t {
                return Ok(None);
            }
        }
        for (s, &t) in map.iter().enumerate() {
            if coarse.strata[t].dim < self.strata[s].dim {
                return Ok(None);
            }
        }
        Ok(Some(map))
    }

    pub fn is_stratified_coarsening(&self, coarse: &Stratification) -> Result<bool, StratError> {
        Ok(self.coarsening_map(coarse)?.is_some())
    }

    /// Restriction to a subcomplex, keeping levels and formal dimension.
    pub fn restrict(&self, sub: &SimplicialComplex) -> Result<Stratification, StratError> {
        if !sub.is_subcomplex_of(&self.complex) {
            let bad = sub.facets().iter().find(|f| !self.complex.contains(f)).unwrap().clone();
            return Err(ComplexError::NotASimplex(bad).into());
        }
        let levels: Vec<usize> = sub.iter().map(|s| self.levels[self.complex.index_of(s).unwrap()]).collect();
        if !levels.contains(&self.formal_dim) {
            return Err(StratError::EmptyIntersectionWithRegularPart);
        }
        Self::from_levels(sub.clone(), self.formal_dim, levels)
    }

    /// Restriction to the closed star of a simplex.
    pub fn restrict_to_star(&self, s: &Simplex) -> Result<Stratification, StratError> {
        self.restrict(&self.complex.closed_star(s)?)
    }

    /// Restriction to the complement of the open star of a vertex (a
    /// deformation retract of the complement of that vertex).
    pub fn remove_vertex(&self, v: Vertex) -> Result<Stratification, StratError> {
        let sub = self.complex.full_subcomplex(|x| x != v);
        if sub.is_empty() {
            return Err(StratError::EmptyIntersectionWithRegularPart);
        }
        self.restrict(&sub)
    }

    /// Cone filtration: the apex is the new bottom skeleton and every
    /// other simplex moves up one level.
    pub fn cone(&self, apex: Vertex) -> Result<Stratification, StratError> {
        let cone = self.complex.cone(apex)?;
        let apex_s = Simplex::vertex(apex);
        let levels = cone
            .iter()
            .map(|s| {
                if *s == apex_s {
                    0
                } else {
                    let base = s.difference(&apex_s).unwrap();
                    self.levels[self.complex.index_of(&base).unwrap()] + 1
                }
            })
            .collect();
        Self::from_levels(cone, self.formal_dim + 1, levels)
    }

    /// Join filtration with the boundary of the `(m+1)`-simplex on the labels
    /// `first..first+m+2`.
    pub fn join_sphere(&self, m: usize, first: Vertex) -> Result<Stratification, StratError> {
        let sphere = SimplicialComplex::sphere(m, first);
        self.join_with(&sphere, m)
    }

    /// Join filtration `K ⊂ K * X_0 ⊂ ...` for a complex `K` of dimension `m`
    /// on labels disjoint from this complex.
    pub fn join_with(&self, sphere: &SimplicialComplex, m: usize) -> Result<Stratification, StratError> {
        let joined = sphere.join(&self.complex)?;
        let levels = joined
            .iter()
            .map(|s| {
                let base: Vec<Vertex> = s.vertices().iter().copied().filter(|v| self.complex.contains(&Simplex::vertex(*v))).collect();
                if base.is_empty() {
                    m
                } else {
                    let b = Simplex::new(base).unwrap();
                    m + 1 + self.levels[self.complex.index_of(&b).unwrap()]
                }
            })
            .collect();
        Self::from_levels(joined, m + 1 + self.formal_dim, levels)
    }

    /// Adds the vertex `x` to the bottom of the filtration.
    pub fn point_refinement(&self, x: Vertex) -> Result<Stratification, StratError> {
        let xs = Simplex::vertex(x);
        let g = self.complex.index_of(&xs).ok_or(ComplexError::NotASimplex(xs))?;
        if self.strata[self.stratum_of[g]].simplices.len() == 1 {
            return Err(StratError::AlreadyAPointStratum(x));
        }
        let mut levels = self.levels.clone();
        levels[g] = 0;
        Self::from_levels(self.complex.clone(), self.formal_dim, levels)
    }

    /// Simplicial link of `s` with levels `level(t ∪ s) - dim s - 1`.
    pub fn link(&self, s: &Simplex) -> Result<Stratification, StratError> {
        let g = self.complex.index_of(s).ok_or_else(|| ComplexError::NotASimplex(s.clone()))?;
        if self.is_regular_simplex(g) {
            return Err(StratError::RegularSimplex(s.clone()));
        }
        let lk = self.complex.link(s)?;
        if lk.is_empty() {
            return Err(StratError::EmptyLink(s.clone()));
        }
        let shift = s.dim() + 1;
        let levels = lk.iter().map(|t| self.levels[self.complex.index_of(&t.union(s)).unwrap()] - shift).collect();
        Self::from_levels(lk, self.formal_dim - shift, levels)
    }

    /// Link of `s` inside the stratum closure data: for each `j`, the
    /// subcomplex of link simplices of level at most `j`.
    pub fn link_profile(&self, s: &Simplex) -> Result<LinkProfile, StratError> {
        let lk = self.link(s)?;
        let mut skeleta = Vec::with_capacity(lk.formal_dim + 1);
        for j in 0..=lk.formal_dim {
            let sub = lk.skeleton(j);
            skeleta.push(reduced(&simplicial_homology(&sub, Ring::Z)));
        }
        Ok(LinkProfile { connected: lk.complex.components().len() == 1, skeleta })
    }

    /// Necessary conditions for a CS set, computed from links.
    pub fn cs_diagnostics(&self) -> CsReport {
        let mut link_inconsistencies = Vec::new();
        let mut disconnected_links = Vec::new();
        let mut link_errors = Vec::new();
        for st in &self.strata {
            if st.dim == self.formal_dim {
                continue;
            }
            let mut by_dim: BTreeMap<usize, Vec<(usize, LinkProfile)>> = BTreeMap::new();
            for &g in &st.simplices {
                let s = self.complex.simplex(g);
                match self.link_profile(s) {
                    Ok(p) => by_dim.entry(s.dim()).or_default().push((g, p)),
                    Err(e) => link_errors.push((st.id, g, e)),
                }
            }
            let top = by_dim.keys().next_back().copied();
            for (d, profiles) in &by_dim {
                let (g0, p0) = &profiles[0];
                if let Some((g1, p1)) = profiles.iter().find(|(_, p)| p != p0) {
                    link_inconsistencies.push(LinkInconsistency {
                        stratum: st.id,
                        dim: *d,
                        first: self.complex.simplex(*g0).clone(),
                        first_profile: p0.clone(),
                        second: self.complex.simplex(*g1).clone(),
                        second_profile: p1.clone(),
                    });
                }
                if Some(*d) == top {
                    for (g, p) in profiles {
                        if !p.connected {
                            disconnected_links.push((st.id, self.complex.simplex(*g).clone()));
                        }
                    }
                }
            }
        }
        let codim_one = self.strata.iter().filter(|s| s.dim + 1 == self.formal_dim).map(|s| s.id).collect();
        CsReport {
            frontier_anomalies: self.anomalies.clone(),
            link_inconsistencies,
            disconnected_links,
            link_errors,
            codim_one,
        }
    }

    /// Full subcomplex of the barycentric subdivision on the regular
    /// simplices, built directly from chains. Vertex `i` stands for the
    /// simplex with global index `i`.
    pub fn regular_spine(&self) -> SimplicialComplex {
        let mut chains: Vec<Simplex> = Vec::new();
        for f in self.complex.facets() {
            let g = self.complex.index_of(f).unwrap();
            if !self.is_regular_simplex(g) {
                continue;
            }
            let mut stack = vec![g as Vertex];
            self.descend(f, &mut stack, &mut chains);
        }
        SimplicialComplex::from_simplices(chains)
    }

    fn descend(&self, s: &Simplex, stack: &mut Vec<Vertex>, out: &mut Vec<Simplex>) {
        let mut any = false;
        for (face, _) in s.boundary() {
            let g = self.complex.index_of(&face).unwrap();
            if self.is_regular_simplex(g) {
                any = true;
                stack.push(g as Vertex);
                self.descend(&face, stack, out);
                stack.pop();
            }
        }
        if !any {
            out.push(Simplex::new(stack.iter().copied()).unwrap());
        }
    }

    /// Components of the regular part: regular simplices joined by the
    /// codimension-one face relation. Returns one label per regular simplex
    /// (global order, `None` for singular ones) and the component count.
    pub fn regular_components(&self) -> (Vec<Option<usize>>, usize) {
        let n = self.complex.num_simplices();
        let mut uf = UnionFind::new(n);
        for (g, s) in self.complex.iter().enumerate() {
            if !self.is_regular_simplex(g) {
                continue;
            }
            for (face, _) in s.boundary() {
                let f = self.complex.index_of(&face).unwrap();
                if self.is_regular_simplex(f) {
                    uf.union(f, g);
                }
            }
        }
        let mut labels = vec![None; n];
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        for (g, label) in labels.iter_mut().enumerate() {
            if self.is_regular_simplex(g) {
                let r = uf.find(g);
                let k = map.len();
                *label = Some(*map.entry(r).or_insert(k));
            }
        }
        (labels, map.len())
    }
}

fn closure_poset(
    complex: &SimplicialComplex,
    formal_dim: usize,
    strata: &[Stratum],
    stratum_of: &[usize],
) -> (StrataPoset, Vec<FrontierAnomaly>) {
    let k = strata.len();
    let n = complex.num_simplices();
    let mut le = vec![vec![false; k]; k];
    let mut anomalies = Vec::new();
    let mut stamp = vec![usize::MAX; n];
    for q in strata {
        let mut hits = vec![0usize; k];
        for &g in &q.simplices {
            for face in complex.simplex(g).faces() {
                let f = complex.index_of(&face).unwrap();
                if stamp[f] != q.id {
                    stamp[f] = q.id;
                    hits[stratum_of[f]] += 1;
                }
            }
        }
        for s in strata {
            if hits[s.id] == s.simplices.len() {
                le[s.id][q.id] = true;
            } else if hits[s.id] > 0 {
                anomalies.push(FrontierAnomaly::PartialClosure { a: s.id, b: q.id });
            }
        }
    }
    let dims: Vec<usize> = strata.iter().map(|s| s.dim).collect();
    for a in 0..k {
        for b in 0..k {
            if a != b && le[a][b] && dims[a] >= dims[b] {
                anomalies.push(FrontierAnomaly::DimensionOrder { a, b });
            }
        }
    }
    // closure containment is transitive, but an anomaly could break
    // antisymmetry; the longest-chain search only follows strict steps with
    // increasing dimension to stay finite.
    let mut strict = le.clone();
    for a in 0..k {
        for b in 0..k {
            if a != b && strict[a][b] && dims[a] >= dims[b] {
                strict[a][b] = false;
            }
        }
    }
    let depth = longest_chain(&strict);
    (StrataPoset { formal_dim, dims, le, depth }, anomalies)
}

/// Reduced Betti numbers and torsion of a complex, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedHomology {
    pub ranks: Vec<usize>,
    pub torsion: Vec<Vec<num_bigint::BigUint>>,
}

fn reduced(h: &Homology) -> ReducedHomology {
    let mut ranks: Vec<usize> = h.degrees.iter().map(|d| d.rank).collect();
    if let Some(r0) = ranks.first_mut() {
        *r0 = r0.saturating_sub(1);
    }
    while ranks.len() > 1 && ranks.last() == Some(&0) && h.degrees[ranks.len() - 1].torsion.is_empty() {
        ranks.pop();
    }
    let torsion = h.degrees.iter().take(ranks.len()).map(|d| d.torsion.clone()).collect();
    ReducedHomology { ranks, torsion }
}

/// Homology of each link skeleton `L_0 ⊂ L_1 ⊂ ...`, plus connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkProfile {
    pub connected: bool,
    pub skeleta: Vec<ReducedHomology>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkInconsistency {
    pub stratum: usize,
    pub dim: usize,
    pub first: Simplex,
    pub first_profile: LinkProfile,
    pub second: Simplex,
    pub second_profile: LinkProfile,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsReport {
    pub frontier_anomalies: Vec<FrontierAnomaly>,
    pub link_inconsistencies: Vec<LinkInconsistency>,
    /// Top-dimensional carrier simplices of singular strata with disconnected links.
    pub disconnected_links: Vec<(usize, Simplex)>,
    pub link_errors: Vec<(usize, usize, StratError)>,
    pub codim_one: Vec<usize>,
}

impl CsReport {
    pub fn frontier_ok(&self) -> bool {
        self.frontier_anomalies.is_empty()
    }

    pub fn links_consistent(&self) -> bool {
        self.link_inconsistencies.is_empty() && self.link_errors.is_empty()
    }

    pub fn normal(&self) -> bool {
        self.disconnected_links.is_empty()
    }

    /// True when no necessary condition failed.
    pub fn passes(&self) -> bool {
        self.frontier_ok() && self.links_consistent()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cx(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| f.iter().copied())).unwrap()
    }

    fn s(v: &[Vertex]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn trivial_has_one_regular_stratum() {
        let t = Stratification::trivial(SimplicialComplex::sphere(2, 0)).unwrap();
        assert_eq!(t.strata().len(), 1);
        assert_eq!(t.depth(), 0);
        assert!(t.cs_diagnostics().passes());
    }

    #[test]
    fn builder_errors() {
        let c = cx(&[&[0, 1], &[1, 2]]);
        let e = Stratification::new(c.clone(), 1, &[(0, vec![s(&[5])])]);
        assert!(matches!(e, Err(StratError::SkeletonNotSubcomplex { .. })));
        let e = Stratification::new(c.clone(), 1, &[(0, c.facets().to_vec())]);
        assert!(matches!(e, Err(StratError::SkeletonTooLarge { .. })));
        let e = Stratification::new(c.clone(), 0, &[]);
        assert!(matches!(e, Err(StratError::FormalDimTooSmall { .. })));
        let e = Stratification::new(c.clone(), 2, &[(0, vec![s(&[0])]), (1, c.facets().to_vec())]);
        assert_eq!(e, Err(StratError::SingularEqualsTotal));
        let e = Stratification::new(c.clone(), 2, &[(0, vec![s(&[0])]), (1, vec![s(&[1])])]);
        assert!(matches!(e, Err(StratError::NotNested { .. })));
    }

    #[test]
    fn cone_over_circle() {
        let circle = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
        let cone = circle.cone(10).unwrap();
        assert_eq!(cone.strata().len(), 2);
        assert_eq!(cone.depth(), 1);
        assert_eq!(cone.carrier_index(&s(&[10])).unwrap(), 0);
        let apex = cone.stratum_of_simplex(&s(&[10])).unwrap();
        assert!((0..2).all(|q| cone.poset().le(apex, q)));
        let lk = cone.link(&s(&[10])).unwrap();
        assert_eq!(lk.complex(), circle.complex());
        assert_eq!(lk.levels(), circle.levels());
    }

    #[test]
    fn join_with_zero_sphere_is_suspension() {
        let circle = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
        let j = circle.join_sphere(0, 10).unwrap();
        assert_eq!(j.formal_dim(), 2);
        assert_eq!(j.strata().len(), 3);
        assert_eq!(j.depth(), 1);
        assert!(j.cs_diagnostics().passes());
        assert!(j.cs_diagnostics().normal());
    }

    #[test]
    fn point_refinement_and_coarsening() {
        let t = Stratification::trivial(SimplicialComplex::sphere(2, 0)).unwrap();
        let r = t.point_refinement(0).unwrap();
        assert_eq!(r.strata().len(), 2);
        assert!(r.is_stratified_coarsening(&t).unwrap());
        assert!(!t.is_stratified_coarsening(&r).unwrap());
        assert_eq!(r.point_refinement(0), Err(StratError::AlreadyAPointStratum(0)));
        assert_eq!(r.coarsening_map(&r).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn refinement_inside_a_singular_arc_splits_it() {
        // suspension of a circle with the singular poles replaced by a singular
        // meridian arc
        let circle = Stratification::trivial(cx(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap();
        let c = circle.complex().suspension(10, 11).unwrap();
        let arc = vec![s(&[10, 0]), s(&[0, 11])];
        let st = Stratification::new(c, 2, &[(1, arc)]).unwrap();
        assert_eq!(st.strata().len(), 2);
        let refined = st.point_refinement(0).unwrap();
        // {0}, two open half arcs, and the regular part
        assert_eq!(refined.strata().len(), 4);
        let map = refined.coarsening_map(&st).unwrap().unwrap();
        assert_eq!(map[refined.stratum_of_simplex(&s(&[0])).unwrap()], st.stratum_of_simplex(&s(&[0])).unwrap());
    }

    #[test]
    fn regular_spine_of_trivial_is_subdivision() {
        let c = SimplicialComplex::sphere(1, 0);
        let t = Stratification::trivial(c.clone()).unwrap();
        assert_eq!(t.regular_spine().f_vector(), c.barycentric_subdivision().complex.f_vector());
    }

    #[test]
    fn regular_components_of_suspension() {
        let circle = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
        let j = circle.join_sphere(0, 10).unwrap();
        assert_eq!(j.regular_components().1, 1);
        assert_eq!(j.regular_spine().components().len(), 1);
    }

    fn sphere_refinements() -> impl Strategy<Value = (usize, Vec<Vertex>)> {
        (1usize..4).prop_flat_map(|d| (Just(d), proptest::sample::subsequence((0..(d as Vertex + 2)).collect::<Vec<_>>(), 0..=d)))
    }

    proptest! {
        #[test]
        fn strata_partition_simplices((d, pts) in sphere_refinements()) {
            let mut st = Stratification::trivial(SimplicialComplex::sphere(d, 0)).unwrap();
            for p in &pts {
                st = st.point_refinement(*p).unwrap();
            }
            let total: usize = st.strata().iter().map(|s| s.simplices.len()).sum();
            prop_assert_eq!(total, st.complex().num_simplices());
            prop_assert_eq!(st.strata().len(), pts.len() + 1);
            for a in 0..st.strata().len() {
                for b in 0..st.strata().len() {
                    if st.poset().lt(a, b) {
                        prop_assert!(st.poset().dims[a] < st.poset().dims[b]);
                    }
                }
            }
            // minimal strata are exactly the closed ones
            for stratum in st.strata() {
                let minimal = (0..st.strata().len()).all(|b| !st.poset().lt(b, stratum.id));
                let closed = stratum.simplices.iter().all(|&g| {
                    st.complex().simplex(g).faces().iter().all(|f| st.stratum_of_simplex(f).unwrap() == stratum.id)
                });
                prop_assert_eq!(minimal, closed);
            }
        }

        #[test]
        fn cone_adds_one_to_depth(d in 1usize..4) {
            let st = Stratification::trivial(SimplicialComplex::sphere(d, 0)).unwrap().point_refinement(0).unwrap();
            let c = st.cone(100).unwrap();
            prop_assert_eq!(c.depth(), st.depth() + 1);
            let lk = c.link(&Simplex::vertex(100)).unwrap();
            prop_assert_eq!(lk.levels(), st.levels());
        }
    }
}
