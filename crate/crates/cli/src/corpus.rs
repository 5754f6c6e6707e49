//! Built-in fixtures with expected values, and loading of shipped `.strat`
//! files from the corpus directory.

use std::fmt;
use std::path::{Path, PathBuf};

use stratum_core::coarsen::Coarsening;
use stratum_core::{Perversity, Simplex, SimplicialComplex, Stratification, Vertex};

use crate::format::{parse_strat_file, CoarseningDecl, FormatError, NamedStrat, StratFile};

/// Declared, unverified properties of a corpus space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metadata {
    pub normal: bool,
    pub connected: bool,
    pub pre_thom_mather: bool,
}

/// Independent recomputation used for a derived value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    /// Dense rational Gaussian elimination.
    DenseElimination,
    /// Union-find over open stars of regular simplices.
    OpenStarBruteForce,
    /// Links rebuilt from cofaces, with homology by dense elimination.
    CofaceEnumeration,
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Oracle::DenseElimination => "dense-elimination",
            Oracle::OpenStarBruteForce => "open-star-brute-force",
            Oracle::CofaceEnumeration => "coface-enumeration",
        })
    }
}

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Paper(&'static str),
    Trivial,
    Derived(Oracle),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Paper(why) => write!(f, "[PAPER: {why}]"),
            Source::Trivial => f.write_str("[TRIVIAL]"),
            Source::Derived(o) => write!(f, "[DERIVED: {o}]"),
        }
    }
}

/// A checkable statement about an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    /// Betti numbers of the underlying complex.
    Homology { betti: Vec<usize> },
    StrataCount { strat: &'static str, count: usize },
    RegularComponents { strat: &'static str, count: usize },
    /// Betti numbers of the link of a vertex.
    LinkBetti { strat: &'static str, vertex: Vertex, betti: Vec<usize> },
    IntersectionBetti { strat: &'static str, perversity: &'static str, betti: Vec<usize> },
    /// Link consistency along singular strata.
    LinksConsistent { strat: &'static str, consistent: bool },
    ExceptionalCount { coarsening: &'static str, count: usize },
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Homology { betti } => write!(f, "betti = {betti:?}"),
            Check::StrataCount { strat, count } => write!(f, "{strat}: {count} strata"),
            Check::RegularComponents { strat, count } => write!(f, "{strat}: {count} regular components"),
            Check::LinkBetti { strat, vertex, betti } => write!(f, "{strat}: link of {vertex} has betti {betti:?}"),
            Check::IntersectionBetti { strat, perversity, betti } => write!(f, "{strat}/{perversity}: IH betti {betti:?}"),
            Check::LinksConsistent { strat, consistent } => write!(f, "{strat}: links consistent = {consistent}"),
            Check::ExceptionalCount { coarsening, count } => write!(f, "{coarsening}: {count} exceptional strata"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub check: Check,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Triangulated realization; `None` for symbolic-only entries.
    pub file: Option<StratFile>,
    /// Symbolic expression handled by the calculator, if any.
    pub symbolic: Option<&'static str>,
    pub metadata: Metadata,
    pub expected: Vec<Expected>,
}

impl CorpusEntry {
    pub fn stratification(&self, name: &str) -> Option<&Stratification> {
        self.file.as_ref()?.stratification(name).map(|s| &s.strat)
    }

    /// Builds every declared coarsening.
    pub fn coarsenings(&self) -> Vec<(String, Coarsening)> {
        let Some(file) = &self.file else { return Vec::new() };
        file.coarsenings
            .iter()
            .map(|d| {
                let fine = file.stratification(&d.fine).unwrap().strat.clone();
                let coarse = file.stratification(&d.coarse).unwrap().strat.clone();
                let c = Coarsening::new(fine, coarse).unwrap_or_else(|e| panic!("corpus coarsening {}: {e}", d.name));
                (format!("{}/{}", self.name, d.name), c)
            })
            .collect()
    }
}

const CS: Metadata = Metadata { normal: true, connected: true, pre_thom_mather: true };

fn derived(check: Check, oracle: Oracle) -> Expected {
    Expected { check, source: Source::Derived(oracle) }
}

fn paper(check: Check, why: &'static str) -> Expected {
    Expected { check, source: Source::Paper(why) }
}

fn trivial(check: Check) -> Expected {
    Expected { check, source: Source::Trivial }
}

fn simplex<const N: usize>(v: [Vertex; N]) -> Simplex {
    Simplex::new(v).unwrap()
}

fn with_zero(name: &str, strat: Stratification) -> NamedStrat {
    let zero = Perversity::zero(strat.poset());
    let mut n = NamedStrat::new(name, strat);
    n.perversities.push(("zero".into(), zero));
    n
}

fn file(strats: Vec<NamedStrat>, coarsenings: &[(&str, &str, &str)]) -> StratFile {
    StratFile {
        complex: strats[0].strat.complex().clone(),
        stratifications: strats,
        coarsenings: coarsenings
            .iter()
            .map(|(n, f, c)| CoarseningDecl { name: (*n).into(), fine: (*f).into(), coarse: (*c).into() })
            .collect(),
    }
}

/// The seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..7u32 {
        f.push([i, (i + 1) % 7, (i + 3) % 7]);
        f.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(f).unwrap()
}

/// A sphere with two points identified: a cylinder of triangles on
/// `0..=8` with both boundary circles coned to the pinch vertex `9`.
pub fn pinched_torus_complex() -> SimplicialComplex {
    let mut facets = Vec::new();
    for layer in 0..2u32 {
        let (a, b) = (3 * layer, 3 * layer + 3);
        for i in 0..3 {
            let j = (i + 1) % 3;
            facets.push([a + i, a + j, b + i]);
            facets.push([a + j, b + i, b + j]);
        }
    }
    for i in 0..3 {
        let j = (i + 1) % 3;
        facets.push([9, i, j]);
        facets.push([9, 6 + i, 6 + j]);
    }
    SimplicialComplex::from_facets(facets).unwrap()
}

pub const PINCH: Vertex = 9;

fn pinched_torus() -> CorpusEntry {
    let c = pinched_torus_complex();
    let fine = Stratification::new(c.clone(), 2, &[(0, vec![Simplex::vertex(PINCH)])]).unwrap();
    let coarse = Stratification::trivial(c).unwrap();
    CorpusEntry {
        name: "pinched_torus",
        description: "sphere with two points identified, singular at the pinch vertex",
        file: Some(file(vec![with_zero("fine", fine), NamedStrat::new("coarse", coarse)], &[("pinch", "fine", "coarse")])),
        symbolic: Some("T"),
        metadata: Metadata { normal: false, connected: true, pre_thom_mather: true },
        expected: vec![
            derived(Check::Homology { betti: vec![1, 1, 1] }, Oracle::DenseElimination),
            derived(Check::LinkBetti { strat: "fine", vertex: PINCH, betti: vec![2, 2] }, Oracle::CofaceEnumeration),
            derived(Check::IntersectionBetti { strat: "fine", perversity: "zero", betti: vec![1, 0, 1] }, Oracle::DenseElimination),
            derived(Check::RegularComponents { strat: "fine", count: 1 }, Oracle::OpenStarBruteForce),
            derived(Check::LinksConsistent { strat: "fine", consistent: true }, Oracle::CofaceEnumeration),
            trivial(Check::ExceptionalCount { coarsening: "pinch", count: 1 }),
        ],
    }
}

fn sphere(n: usize) -> CorpusEntry {
    const NAMES: [&str; 5] = ["sphere0", "sphere1", "sphere2", "sphere3", "sphere4"];
    let s = Stratification::trivial(SimplicialComplex::sphere(n, 0)).unwrap();
    let mut betti = vec![0; n + 1];
    betti[0] = 1;
    betti[n] += 1;
    CorpusEntry {
        name: NAMES[n],
        description: "boundary of a simplex",
        file: Some(file(vec![with_zero("main", s)], &[])),
        symbolic: None,
        metadata: Metadata { connected: n > 0, ..CS },
        expected: vec![
            derived(Check::Homology { betti }, Oracle::DenseElimination),
            derived(Check::RegularComponents { strat: "main", count: if n == 0 { 2 } else { 1 } }, Oracle::OpenStarBruteForce),
        ],
    }
}

fn torus_entry() -> CorpusEntry {
    CorpusEntry {
        name: "torus",
        description: "seven-vertex torus",
        file: Some(file(vec![with_zero("main", Stratification::trivial(torus()).unwrap())], &[])),
        symbolic: None,
        metadata: CS,
        expected: vec![derived(Check::Homology { betti: vec![1, 2, 1] }, Oracle::DenseElimination)],
    }
}

/// `ΣT²` with apexes 7 and 8 as point strata.
pub fn suspension_torus() -> Stratification {
    Stratification::trivial(torus()).unwrap().join_sphere(0, 7).unwrap()
}

fn suspension_torus_entry() -> CorpusEntry {
    let s = suspension_torus();
    CorpusEntry {
        name: "suspension_torus",
        description: "suspension of the torus, apexes singular",
        file: Some(file(vec![with_zero("main", s.clone()), NamedStrat::new("same", s)], &[("identity", "main", "same")])),
        symbolic: None,
        metadata: CS,
        expected: vec![
            derived(Check::Homology { betti: vec![1, 0, 2, 1] }, Oracle::DenseElimination),
            derived(Check::StrataCount { strat: "main", count: 3 }, Oracle::OpenStarBruteForce),
            derived(Check::LinkBetti { strat: "main", vertex: 7, betti: vec![1, 2, 1] }, Oracle::CofaceEnumeration),
            derived(Check::LinksConsistent { strat: "main", consistent: true }, Oracle::CofaceEnumeration),
            derived(Check::IntersectionBetti { strat: "main", perversity: "zero", betti: vec![1, 2, 0, 1] }, Oracle::DenseElimination),
        ],
    }
}

/// `S^0 * S^0 * T²` filtered two ways: by iterated suspension (poles 9, 10
/// below the circle through 7, 8) and by the join with the square.
fn double_suspension_torus() -> CorpusEntry {
    let base = Stratification::trivial(torus()).unwrap();
    let iterated = base.join_sphere(0, 7).unwrap().join_sphere(0, 9).unwrap();
    let square = SimplicialComplex::from_facets([[7u32, 9], [7, 10], [8, 9], [8, 10]]).unwrap();
    let joined = base.join_with(&square, 1).unwrap();
    CorpusEntry {
        name: "double_suspension_torus",
        description: "double suspension of the torus; the outer poles become fountains",
        file: Some(file(
            vec![with_zero("iterated", iterated), with_zero("join", joined)],
            &[("poles", "iterated", "join")],
        )),
        symbolic: None,
        metadata: CS,
        expected: vec![
            derived(Check::StrataCount { strat: "iterated", count: 5 }, Oracle::OpenStarBruteForce),
            derived(Check::StrataCount { strat: "join", count: 2 }, Oracle::OpenStarBruteForce),
            derived(Check::LinksConsistent { strat: "iterated", consistent: true }, Oracle::CofaceEnumeration),
            derived(Check::LinksConsistent { strat: "join", consistent: true }, Oracle::CofaceEnumeration),
            trivial(Check::ExceptionalCount { coarsening: "poles", count: 0 }),
        ],
    }
}

fn cone_torus() -> CorpusEntry {
    let s = Stratification::trivial(torus()).unwrap().cone(7).unwrap();
    CorpusEntry {
        name: "cone_torus",
        description: "closed cone on the torus",
        file: Some(file(vec![with_zero("main", s)], &[])),
        symbolic: Some("c(T2)"),
        metadata: CS,
        expected: vec![
            derived(Check::Homology { betti: vec![1, 0, 0, 0] }, Oracle::DenseElimination),
            derived(Check::LinkBetti { strat: "main", vertex: 7, betti: vec![1, 2, 1] }, Oracle::CofaceEnumeration),
            derived(Check::IntersectionBetti { strat: "main", perversity: "zero", betti: vec![1, 2, 0, 0] }, Oracle::DenseElimination),
        ],
    }
}

fn real_line_point() -> CorpusEntry {
    let c = SimplicialComplex::from_facets([[1u32, 0], [0, 2]]).unwrap();
    let fine = Stratification::new(c.clone(), 1, &[(0, vec![Simplex::vertex(0)])]).unwrap();
    let coarse = Stratification::trivial(c).unwrap();
    CorpusEntry {
        name: "real_line_point",
        description: "a line with a singular point; the point is 1-exceptional",
        file: Some(file(vec![NamedStrat::new("fine", fine), NamedStrat::new("coarse", coarse)], &[("forget", "fine", "coarse")])),
        symbolic: None,
        metadata: Metadata { normal: false, ..CS },
        expected: vec![
            trivial(Check::ExceptionalCount { coarsening: "forget", count: 1 }),
            derived(Check::RegularComponents { strat: "fine", count: 2 }, Oracle::OpenStarBruteForce),
        ],
    }
}

/// `S¹ * S¹ = S³` with the second circle (10, 11, 12) singular, its
/// refinement at vertex 10, and the trivial filtration.
fn circle_in_sphere() -> CorpusEntry {
    let circle = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
    let singular = circle.join_sphere(1, 10).unwrap();
    let refined = singular.point_refinement(10).unwrap();
    let trivial_s = Stratification::trivial(singular.complex().clone()).unwrap();
    CorpusEntry {
        name: "circle_in_sphere",
        description: "a singular circle in the 3-sphere, refined at a point",
        file: Some(file(
            vec![with_zero("refined", refined), with_zero("circle", singular), NamedStrat::new("smooth", trivial_s)],
            &[("refine", "refined", "circle"), ("forget", "circle", "smooth")],
        )),
        symbolic: Some("S^1 * S1"),
        metadata: CS,
        expected: vec![
            derived(Check::Homology { betti: vec![1, 0, 0, 1] }, Oracle::DenseElimination),
            derived(Check::LinkBetti { strat: "circle", vertex: 10, betti: vec![1, 0, 1] }, Oracle::CofaceEnumeration),
            derived(Check::LinksConsistent { strat: "refined", consistent: true }, Oracle::CofaceEnumeration),
            trivial(Check::ExceptionalCount { coarsening: "refine", count: 0 }),
            trivial(Check::ExceptionalCount { coarsening: "forget", count: 1 }),
        ],
    }
}

/// Apex and circle names in the suspension of the torus.
pub const APEX: Vertex = 7;
pub const ANTIPODE: Vertex = 8;
pub const MARK_P: Vertex = 0;
pub const MARK_Q: Vertex = 3;

/// The `X₃` level of the three-filtration chain: `ΣT²` with the arcs
/// through two marked torus points. Filtrations `S` (apexes and arcs),
/// `R` (the closed circle of arcs) and `T` (trivial).
pub fn chain_of_three() -> [Stratification; 3] {
    let x = suspension_torus();
    let c = x.complex().clone();
    let circle: Vec<Simplex> = [MARK_P, MARK_Q]
        .iter()
        .flat_map(|&m| [simplex([m, APEX]), simplex([m, ANTIPODE])])
        .collect();
    let s = Stratification::new(
        c.clone(),
        3,
        &[(0, vec![Simplex::vertex(APEX), Simplex::vertex(ANTIPODE)]), (1, circle.clone())],
    )
    .unwrap();
    let r = Stratification::new(c.clone(), 3, &[(1, circle)]).unwrap();
    let t = Stratification::trivial(c).unwrap();
    [s, r, t]
}

fn three_filtrations() -> CorpusEntry {
    let [s, r, t] = chain_of_three();
    CorpusEntry {
        name: "three_filtrations",
        description: "a chain of coarsenings whose middle term is not locally conical",
        file: Some(file(
            vec![with_zero("S", s), with_zero("R", r), with_zero("T", t)],
            &[("s_to_r", "S", "R"), ("r_to_t", "R", "T"), ("s_to_t", "S", "T")],
        )),
        symbolic: None,
        metadata: CS,
        expected: vec![
            paper(Check::LinksConsistent { strat: "R", consistent: false }, "the link of v in X1 is T2, the link of P is S2"),
            paper(Check::LinksConsistent { strat: "S", consistent: true }, "S is a CS set"),
            paper(Check::LinksConsistent { strat: "T", consistent: true }, "T is a CS set"),
            derived(Check::LinkBetti { strat: "R", vertex: APEX, betti: vec![1, 2, 1] }, Oracle::CofaceEnumeration),
            derived(Check::LinkBetti { strat: "R", vertex: MARK_P, betti: vec![1, 0, 1] }, Oracle::CofaceEnumeration),
            trivial(Check::ExceptionalCount { coarsening: "s_to_r", count: 0 }),
        ],
    }
}

/// `S` and `R` restricted to the closed star of a marked point, where the
/// middle filtration is locally conical.
fn marked_arc_star() -> CorpusEntry {
    let [s, r, _] = chain_of_three();
    let star = s.complex().closed_star(&Simplex::vertex(MARK_P)).unwrap();
    let (s, r) = (s.restrict(&star).unwrap(), r.restrict(&star).unwrap());
    CorpusEntry {
        name: "marked_arc_star",
        description: "closed star of a marked point in the three-filtration chain",
        file: Some(file(vec![with_zero("S", s), with_zero("R", r)], &[("s_to_r", "S", "R")])),
        symbolic: None,
        metadata: CS,
        expected: vec![
            derived(Check::LinkBetti { strat: "S", vertex: MARK_P, betti: vec![1, 0, 1] }, Oracle::CofaceEnumeration),
            derived(Check::LinkBetti { strat: "R", vertex: MARK_P, betti: vec![1, 0, 1] }, Oracle::CofaceEnumeration),
            trivial(Check::ExceptionalCount { coarsening: "s_to_r", count: 0 }),
        ],
    }
}

/// Six-vertex real projective plane.
pub fn projective_plane() -> SimplicialComplex {
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

fn projective_plane_entry() -> CorpusEntry {
    CorpusEntry {
        name: "projective_plane",
        description: "six-vertex real projective plane",
        file: Some(file(vec![with_zero("main", Stratification::trivial(projective_plane()).unwrap())], &[])),
        symbolic: None,
        metadata: CS,
        expected: vec![derived(Check::Homology { betti: vec![1, 0, 0] }, Oracle::DenseElimination)],
    }
}

fn point_in_sphere(n: usize) -> CorpusEntry {
    let c = SimplicialComplex::sphere(n, 0);
    let fine = Stratification::new(c.clone(), n, &[(0, vec![Simplex::vertex(0)])]).unwrap();
    let coarse = Stratification::trivial(c).unwrap();
    let mut link = vec![0; n];
    link[0] = 1;
    link[n - 1] += 1;
    CorpusEntry {
        name: if n == 2 { "sphere2_point" } else { "sphere3_point" },
        description: "a sphere with one vertex marked singular",
        file: Some(file(vec![with_zero("fine", fine), NamedStrat::new("coarse", coarse)], &[("forget", "fine", "coarse")])),
        symbolic: None,
        metadata: CS,
        expected: vec![
            derived(Check::LinkBetti { strat: "fine", vertex: 0, betti: link }, Oracle::CofaceEnumeration),
            trivial(Check::ExceptionalCount { coarsening: "forget", count: 1 }),
        ],
    }
}

/// `∂Δ⁵` with the flag `0 < [0,1] < [0,1,2]` singular.
fn nested_flag() -> CorpusEntry {
    let c = SimplicialComplex::sphere(4, 0);
    let fine = Stratification::new(
        c.clone(),
        4,
        &[(0, vec![Simplex::vertex(0)]), (1, vec![simplex([0, 1])]), (2, vec![simplex([0, 1, 2])])],
    )
    .unwrap();
    CorpusEntry {
        name: "nested_flag",
        description: "a 4-sphere with a nested flag of singular strata",
        file: Some(file(
            vec![with_zero("fine", fine), NamedStrat::new("coarse", Stratification::trivial(c).unwrap())],
            &[("forget", "fine", "coarse")],
        )),
        symbolic: None,
        metadata: CS,
        expected: vec![trivial(Check::ExceptionalCount { coarsening: "forget", count: 3 })],
    }
}

/// `c(S¹ * S¹)` as `D² * S¹`, with and without the disk center 6 split off.
fn two_cone() -> CorpusEntry {
    let link = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
    let disk = SimplicialComplex::sphere(1, 3).cone(6).unwrap();
    let coarse = link.join_with(&disk, 2).unwrap();
    let refined = coarse.point_refinement(6).unwrap();
    CorpusEntry {
        name: "two_cone",
        description: "cone on the join of two circles, with the apex split off or not",
        file: Some(file(vec![with_zero("refined", refined), with_zero("coarse", coarse)], &[("center", "refined", "coarse")])),
        symbolic: None,
        metadata: CS,
        expected: vec![trivial(Check::ExceptionalCount { coarsening: "center", count: 0 })],
    }
}

fn double_suspension_symbolic() -> CorpusEntry {
    CorpusEntry {
        name: "double_suspension_poincare",
        description: "double suspension of the Poincare sphere, four exceptional strata",
        file: None,
        symbolic: Some("coarsen(S^0 * S^0 * P; 4,4,4,4,4)"),
        metadata: CS,
        expected: Vec::new(),
    }
}

/// Every built-in entry.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut v = vec![pinched_torus()];
    v.extend((0..=4).map(sphere));
    v.extend([
        torus_entry(),
        projective_plane_entry(),
        suspension_torus_entry(),
        double_suspension_torus(),
        cone_torus(),
        real_line_point(),
        circle_in_sphere(),
        three_filtrations(),
        marked_arc_star(),
        point_in_sphere(2),
        point_in_sphere(3),
        nested_flag(),
        two_cone(),
        double_suspension_symbolic(),
    ]);
    v
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

/// `STRATUM_CORPUS_DIR`, else the directory shipped with this crate.
pub fn corpus_dir() -> PathBuf {
    std::env::var_os("STRATUM_CORPUS_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"))
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("no corpus entry or file named {0}")]
    NotFound(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
}

/// Reads `name` as a path when it names a file (a `.strat` suffix or a
/// directory separator), then as `<corpus dir>/<name>.strat`, then falls
/// back to the built-in fixture.
pub fn load(name: &str) -> Result<StratFile, LoadError> {
    let direct = Path::new(name);
    let shipped = corpus_dir().join(format!("{name}.strat"));
    let path = if direct.is_file() && (name.ends_with(".strat") || name.contains(std::path::MAIN_SEPARATOR)) {
        Some(direct.to_path_buf())
    } else if shipped.is_file() {
        Some(shipped)
    } else {
        None
    };
    match path {
        Some(p) => {
            let shown = p.display().to_string();
            let text = std::fs::read_to_string(&p).map_err(|source| LoadError::Io { path: shown.clone(), source })?;
            parse_strat_file(&text).map_err(|source| LoadError::Format { path: shown, source })
        }
        None => entry(name).and_then(|e| e.file).ok_or_else(|| LoadError::NotFound(name.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::emit;

    #[test]
    fn names_are_unique() {
        let c = corpus();
        for (i, e) in c.iter().enumerate() {
            assert!(c[i + 1..].iter().all(|f| f.name != e.name), "{}", e.name);
        }
    }

    #[test]
    fn every_file_round_trips() {
        for e in corpus() {
            if let Some(f) = &e.file {
                assert_eq!(&parse_strat_file(&emit(f)).unwrap(), f, "{}", e.name);
            }
        }
    }

    #[test]
    fn coarsenings_build() {
        let n: usize = corpus().iter().map(|e| e.coarsenings().len()).sum();
        assert!(n >= 10);
    }

    #[test]
    fn symbolic_expressions_resolve() {
        let calc = crate::atoms::calculator_from(&crate::atoms::atoms_text().unwrap()).unwrap();
        for e in corpus() {
            if let Some(x) = e.symbolic {
                let space: stratum_core::symcalc::SymSpace = x.parse().unwrap();
                calc.meta(&space).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            }
        }
    }

    #[test]
    fn chain_of_three_shapes() {
        let [s, r, t] = chain_of_three();
        assert_eq!(s.strata().iter().map(|x| x.dim).collect::<Vec<_>>(), [0, 0, 1, 1, 3]);
        assert_eq!(r.strata().iter().map(|x| x.dim).collect::<Vec<_>>(), [1, 3]);
        assert_eq!(t.strata().len(), 1);
    }
}
