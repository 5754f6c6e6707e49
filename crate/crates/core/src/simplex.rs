//! Finite abstract simplicial complexes and their basic constructions.
//!
//! Vertices are opaque ordered labels. Every simplex is stored with its
//! vertices sorted, and every complex keeps its simplices sorted per
//! dimension, so iteration order is canonical.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::unionfind::UnionFind;

/// Vertex label.
pub type Vertex = u32;

/// Errors raised by complex constructors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("no facets given")]
    EmptyInput,
    #[error("a face has no vertices")]
    EmptyFace,
    #[error("vertex {0} is listed twice in one face")]
    DuplicateVertexInFace(Vertex),
    #[error("apex {0} is already a vertex of the complex")]
    ApexCollision(Vertex),
    #[error("vertex {0} occurs in both complexes")]
    VertexCollision(Vertex),
    #[error("{0} is not a simplex of the complex")]
    NotASimplex(Simplex),
}

/// A nonempty set of vertices, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Builds a simplex from any vertex list; rejects empty and repeated input.
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Self, ComplexError> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(ComplexError::EmptyFace);
        }
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateVertexInFace(w[0]));
            }
        }
        Ok(Simplex(v))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(alloc::vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True when every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Vertices of `self` not in `other`, if any remain.
    pub fn difference(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<Vertex> = self.0.iter().copied().filter(|x| !other.contains_vertex(*x)).collect();
        if v.is_empty() {
            None
        } else {
            Some(Simplex(v))
        }
    }

    pub fn with_vertex(&self, v: Vertex) -> Simplex {
        let mut w = self.0.clone();
        match w.binary_search(&v) {
            Ok(_) => {}
            Err(pos) => w.insert(pos, v),
        }
        Simplex(w)
    }

    /// Codimension-one faces with their boundary signs, in the order of the
    /// removed vertex position.
    pub fn boundary(&self) -> Vec<(Simplex, i64)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                (Simplex(v), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        let mut out = Vec::with_capacity((1usize << k) - 1);
        for mask in 1u32..(1u32 << k) {
            let v: Vec<Vertex> =
                (0..k).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect();
            out.push(Simplex(v));
        }
        out
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A finite abstract simplicial complex, possibly empty.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<Simplex>,
    by_dim: Vec<Vec<Simplex>>,
    offsets: Vec<usize>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("f_vector", &self.f_vector())
            .field("facets", &self.facets)
            .finish()
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex { facets: Vec::new(), by_dim: Vec::new(), offsets: alloc::vec![0] }
    }

    /// Closes a facet list under faces and drops dominated facets.
    pub fn from_facets<I, F>(facets: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let mut list = Vec::new();
        for f in facets {
            list.push(Simplex::new(f)?);
        }
        if list.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        Ok(Self::from_simplices(list))
    }

    /// Same as [`from_facets`](Self::from_facets) for already validated simplices.
    /// An empty list gives the empty complex.
    pub fn from_simplices(list: Vec<Simplex>) -> Self {
        let top = list.iter().map(Simplex::dim).max();
        let Some(top) = top else { return Self::empty() };
        let mut sets: Vec<BTreeSet<Simplex>> = (0..=top).map(|_| BTreeSet::new()).collect();
        for f in &list {
            if sets[f.dim()].contains(f) {
                continue;
            }
            for face in f.faces() {
                sets[face.dim()].insert(face);
            }
        }
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Self::from_layers(by_dim)
    }

    fn from_layers(by_dim: Vec<Vec<Simplex>>) -> Self {
        let mut offsets = Vec::with_capacity(by_dim.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for layer in &by_dim {
            acc += layer.len();
            offsets.push(acc);
        }
        let mut dominated: Vec<Vec<bool>> = by_dim.iter().map(|l| alloc::vec![false; l.len()]).collect();
        for d in 1..by_dim.len() {
            for s in &by_dim[d] {
                for (face, _) in s.boundary() {
                    if let Ok(i) = by_dim[d - 1].binary_search(&face) {
                        dominated[d - 1][i] = true;
                    }
                }
            }
        }
        let mut facets = Vec::new();
        for (d, layer) in by_dim.iter().enumerate() {
            for (i, s) in layer.iter().enumerate() {
                if !dominated[d][i] {
                    facets.push(s.clone());
                }
            }
        }
        facets.sort();
        SimplicialComplex { facets, by_dim, offsets }
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Dimension, with `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    pub fn num_simplices(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Position of a simplex within its dimension layer.
    pub fn index_in_dim(&self, s: &Simplex) -> Option<usize> {
        self.by_dim.get(s.dim())?.binary_search(s).ok()
    }

    /// Position of a simplex in the global order (by dimension, then lexicographic).
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index_in_dim(s).map(|i| self.offsets[s.dim()] + i)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_in_dim(s).is_some()
    }

    pub fn offset(&self, d: usize) -> usize {
        self.offsets[d.min(self.offsets.len() - 1)]
    }

    pub fn simplex(&self, global: usize) -> &Simplex {
        let d = self.offsets.partition_point(|&o| o <= global) - 1;
        &self.by_dim[d][global - self.offsets[d]]
    }

    /// All simplices in global order.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flat_map(|l| l.iter())
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.simplices(0).last().map(|s| s.0[0])
    }

    /// The smallest label larger than every vertex.
    pub fn fresh_vertex(&self) -> Vertex {
        self.max_vertex().map_or(0, |v| v + 1)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }

    /// Cone with a new apex vertex.
    pub fn cone(&self, apex: Vertex) -> Result<Self, ComplexError> {
        if self.contains(&Simplex::vertex(apex)) {
            return Err(ComplexError::ApexCollision(apex));
        }
        if self.is_empty() {
            return Ok(Self::from_simplices(alloc::vec![Simplex::vertex(apex)]));
        }
        Ok(Self::from_simplices(self.facets.iter().map(|f| f.with_vertex(apex)).collect()))
    }

    /// Join with a complex on disjoint vertices.
    pub fn join(&self, other: &SimplicialComplex) -> Result<Self, ComplexError> {
        self.check_disjoint(other)?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.facets.len() * other.facets.len());
        for f in &self.facets {
            for g in &other.facets {
                out.push(f.union(g));
            }
        }
        Ok(Self::from_simplices(out))
    }

    /// Join with the two-point complex `{north, south}`.
    pub fn suspension(&self, north: Vertex, south: Vertex) -> Result<Self, ComplexError> {
        let poles = Self::from_simplices(alloc::vec![Simplex::vertex(north), Simplex::vertex(south)]);
        self.join(&poles)
    }

    pub fn disjoint_union(&self, other: &SimplicialComplex) -> Result<Self, ComplexError> {
        self.check_disjoint(other)?;
        let mut all = self.facets.clone();
        all.extend(other.facets.iter().cloned());
        Ok(Self::from_simplices(all))
    }

    fn check_disjoint(&self, other: &SimplicialComplex) -> Result<(), ComplexError> {
        for v in other.vertices() {
            if self.contains(&Simplex::vertex(v)) {
                return Err(ComplexError::VertexCollision(v));
            }
        }
        Ok(())
    }

    /// Applies an injective relabeling to every vertex.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        let facets = self
            .facets
            .iter()
            .map(|s| {
                let mut v: Vec<Vertex> = s.0.iter().map(|&x| f(x)).collect();
                v.sort_unstable();
                Simplex(v)
            })
            .collect();
        Self::from_simplices(facets)
    }

    /// Simplices disjoint from `s` whose union with `s` is a simplex.
    pub fn link(&self, s: &Simplex) -> Result<Self, ComplexError> {
        if !self.contains(s) {
            return Err(ComplexError::NotASimplex(s.clone()));
        }
        let parts = self
            .facets
            .iter()
            .filter(|f| s.is_face_of(f))
            .filter_map(|f| f.difference(s))
            .collect();
        Ok(Self::from_simplices(parts))
    }

    /// Smallest subcomplex containing every simplex that has `s` as a face.
    pub fn closed_star(&self, s: &Simplex) -> Result<Self, ComplexError> {
        if !self.contains(s) {
            return Err(ComplexError::NotASimplex(s.clone()));
        }
        Ok(Self::from_simplices(self.facets.iter().filter(|f| s.is_face_of(f)).cloned().collect()))
    }

    /// Subcomplex of simplices whose vertices all satisfy `keep`.
    pub fn full_subcomplex(&self, keep: impl Fn(Vertex) -> bool) -> Self {
        let parts = self
            .facets
            .iter()
            .filter_map(|f| {
                let v: Vec<Vertex> = f.0.iter().copied().filter(|x| keep(*x)).collect();
                if v.is_empty() {
                    None
                } else {
                    Some(Simplex(v))
                }
            })
            .collect();
        Self::from_simplices(parts)
    }

    /// Subcomplex generated by the simplices satisfying `keep`; callers pass
    /// a face-closed predicate.
    pub fn filter_closed(&self, keep: impl Fn(&Simplex) -> bool) -> Self {
        let layers: Vec<Vec<Simplex>> = self
            .by_dim
            .iter()
            .map(|l| l.iter().filter(|s| keep(s)).cloned().collect::<Vec<_>>())
            .collect();
        let mut layers = layers;
        while layers.last().is_some_and(Vec::is_empty) {
            layers.pop();
        }
        debug_assert!(layers.iter().all(|l| !l.is_empty()));
        Self::from_layers(layers)
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let verts = self.vertices();
        let mut uf = UnionFind::new(verts.len());
        for e in self.simplices(1) {
            let a = verts.binary_search(&e.0[0]).unwrap();
            let b = verts.binary_search(&e.0[1]).unwrap();
            uf.union(a, b);
        }
        let (labels, k) = uf.labels();
        let mut out: Vec<Vec<Vertex>> = (0..k).map(|_| Vec::new()).collect();
        for (i, v) in verts.iter().enumerate() {
            out[labels[i]].push(*v);
        }
        out
    }

    /// First barycentric subdivision.
    ///
    /// Vertex `i` of the result stands for the simplex with global index `i`.
    pub fn barycentric_subdivision(&self) -> Subdivision {
        let mut chains = Vec::new();
        for f in &self.facets {
            let mut perm: Vec<Vertex> = f.0.clone();
            permutations(&mut perm, 0, &mut |order| {
                let mut chain = Vec::with_capacity(order.len());
                let mut prefix: Vec<Vertex> = Vec::with_capacity(order.len());
                for &v in order {
                    prefix.push(v);
                    let mut s = prefix.clone();
                    s.sort_unstable();
                    chain.push(self.index_of(&Simplex(s)).unwrap() as Vertex);
                }
                chain.sort_unstable();
                chains.push(Simplex(chain));
            });
        }
        Subdivision { complex: Self::from_simplices(chains), vertex_simplex: self.iter().cloned().collect() }
    }

    /// Boundary of the standard `(d+1)`-simplex on labels `first..=first+d+1`,
    /// a triangulated `d`-sphere. For `d = -1`... not supported; `d >= 0`.
    pub fn sphere(d: usize, first: Vertex) -> Self {
        let n = d as Vertex + 2;
        let all: Vec<Vertex> = (first..first + n).collect();
        let facets = (0..all.len())
            .map(|i| {
                let mut v = all.clone();
                v.remove(i);
                Simplex(v)
            })
            .collect();
        Self::from_simplices(facets)
    }

    /// The full simplex on labels `first..=first+d`.
    pub fn full_simplex(d: usize, first: Vertex) -> Self {
        Self::from_simplices(alloc::vec![Simplex((first..=first + d as Vertex).collect())])
    }
}

fn permutations(v: &mut Vec<Vertex>, k: usize, f: &mut impl FnMut(&[Vertex])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Output of [`SimplicialComplex::barycentric_subdivision`].
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// Simplex of the original complex for each vertex of the subdivision.
    pub vertex_simplex: Vec<Simplex>,
}

impl Subdivision {
    /// Largest original simplex in the chain `s`.
    pub fn carrier(&self, s: &Simplex) -> &Simplex {
        s.vertices()
            .iter()
            .map(|&v| &self.vertex_simplex[v as usize])
            .max_by_key(|x| x.dim())
            .expect("simplices are nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| f.iter().copied())).unwrap()
    }

    #[test]
    fn path_closure() {
        let c = cx(&[&[0, 1], &[1, 2]]);
        assert_eq!(c.f_vector(), [3, 2]);
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn single_vertex() {
        let c = cx(&[&[0]]);
        assert_eq!(c.dim(), 0);
        assert_eq!(c.num_simplices(), 1);
    }

    #[test]
    fn tetrahedron_boundary_counts() {
        let c = SimplicialComplex::sphere(2, 0);
        assert_eq!(c.f_vector(), [4, 6, 4]);
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn errors() {
        let none: [[Vertex; 0]; 0] = [];
        assert_eq!(SimplicialComplex::from_facets(none), Err(ComplexError::EmptyInput));
        assert_eq!(
            SimplicialComplex::from_facets([[1, 1]]),
            Err(ComplexError::DuplicateVertexInFace(1))
        );
        let c = cx(&[&[0, 1]]);
        assert_eq!(c.cone(1), Err(ComplexError::ApexCollision(1)));
        assert_eq!(c.join(&cx(&[&[1, 2]])), Err(ComplexError::VertexCollision(1)));
        assert!(matches!(c.link(&Simplex::vertex(7)), Err(ComplexError::NotASimplex(_))));
    }

    #[test]
    fn dominated_facets_dropped() {
        let c = cx(&[&[0, 1, 2], &[0, 1]]);
        assert_eq!(c.facets().len(), 1);
    }

    #[test]
    fn cone_over_two_points() {
        let c = cx(&[&[0], &[1]]).cone(2).unwrap();
        assert_eq!(c.f_vector(), [3, 2]);
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn join_of_two_zero_spheres_is_square() {
        let a = SimplicialComplex::sphere(0, 0);
        let b = SimplicialComplex::sphere(0, 2);
        let j = a.join(&b).unwrap();
        assert_eq!(j.f_vector(), [4, 4]);
        assert!(j.vertices().iter().all(|&v| j.link(&Simplex::vertex(v)).unwrap().f_vector() == [2]));
    }

    #[test]
    fn join_with_point_is_cone() {
        let x = SimplicialComplex::sphere(1, 0);
        let j = x.join(&cx(&[&[9]])).unwrap();
        assert_eq!(j, x.cone(9).unwrap());
    }

    #[test]
    fn subdivision_counts() {
        let e = cx(&[&[0, 1]]).barycentric_subdivision();
        assert_eq!(e.complex.f_vector(), [3, 2]);
        let t = cx(&[&[0, 1, 2]]).barycentric_subdivision();
        assert_eq!(t.complex.f_vector(), [7, 12, 6]);
        let top = t.complex.facets()[0].clone();
        assert_eq!(t.carrier(&top).dim(), 2);
    }

    #[test]
    fn links() {
        let tri = SimplicialComplex::sphere(1, 0);
        assert_eq!(tri.link(&Simplex::vertex(0)).unwrap().f_vector(), [2]);
        let tet = SimplicialComplex::sphere(2, 0);
        let l = tet.link(&Simplex::vertex(0)).unwrap();
        assert_eq!(l, SimplicialComplex::sphere(1, 1));
        let top = tet.facets()[0].clone();
        assert!(tet.link(&top).unwrap().is_empty());
    }

    #[test]
    fn octahedron_edge_link() {
        let oct = SimplicialComplex::sphere(0, 0)
            .join(&SimplicialComplex::sphere(0, 2))
            .unwrap()
            .join(&SimplicialComplex::sphere(0, 4))
            .unwrap();
        assert_eq!(oct.f_vector(), [6, 12, 8]);
        let e = Simplex::new([0, 2]).unwrap();
        assert_eq!(oct.link(&e).unwrap().f_vector(), [2]);
    }

    #[test]
    fn global_indexing_round_trips() {
        let c = SimplicialComplex::sphere(2, 0);
        for (i, s) in c.iter().enumerate() {
            assert_eq!(c.index_of(s), Some(i));
            assert_eq!(c.simplex(i), s);
        }
    }

    #[test]
    fn components_of_disjoint_union() {
        let a = SimplicialComplex::sphere(1, 0);
        let b = SimplicialComplex::sphere(1, 10);
        let u = a.disjoint_union(&b).unwrap();
        assert_eq!(u.components().len(), 2);
    }
}
