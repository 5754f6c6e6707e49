//! Symbolic calculator for intersection homotopy facts on spaces assembled
//! from declared atoms by cones, Euclidean products, sphere joins and
//! coarsenings. Every fact carries the chain of rules that produced it.
//!
//! Facts recorded from the literature form their own provenance class.
//! Rules may read them but never overwrite them; the consistency check
//! compares every pair of facts about the same request.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::coarsen::{classify, Applicability, LinkFact, StratumClass};
use crate::extint::{ExtInt, Finite, PosInf};
use crate::perv::Perversity;
use crate::strat::StrataPoset;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("atom {0} is already declared")]
    DuplicateAtom(String),
    #[error("inconsistent declaration of {atom}: {reason}")]
    InconsistentDeclaration { atom: String, reason: String },
    #[error("perversity has {got} values, the space has {expected} strata")]
    PerversityLength { expected: usize, got: usize },
    #[error("perversity is nonzero on regular stratum {0}")]
    NonZeroOnRegular(usize),
    #[error("perversity exceeds the top perversity on stratum {0}")]
    PerversityTooLarge(usize),
    #[error("invalid merge: {0}")]
    InvalidMerge(String),
    #[error("expected a coarsened space")]
    NotACoarsening,
}

/// Value of a homotopy group or pointed set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymGroup {
    Trivial,
    FreeAbelian(usize),
    NamedAtom(String),
    DirectProduct(Vec<SymGroup>),
    Unknown(String),
}

impl SymGroup {
    /// Flattening product with `Trivial` as unit. Free abelian factors merge
    /// and an unknown factor makes the product unknown.
    pub fn product(parts: impl IntoIterator<Item = SymGroup>) -> SymGroup {
        let mut rank = 0;
        let mut rest = Vec::new();
        for p in parts {
            match p {
                SymGroup::Trivial => {}
                SymGroup::FreeAbelian(n) => rank += n,
                SymGroup::DirectProduct(inner) => match SymGroup::product(inner) {
                    SymGroup::DirectProduct(v) => {
                        for g in v {
                            match g {
                                SymGroup::FreeAbelian(n) => rank += n,
                                other => rest.push(other),
                            }
                        }
                    }
                    SymGroup::FreeAbelian(n) => rank += n,
                    SymGroup::Trivial => {}
                    other => rest.push(other),
                },
                u @ SymGroup::Unknown(_) => return u,
                named => rest.push(named),
            }
        }
        if rank > 0 {
            rest.insert(0, SymGroup::FreeAbelian(rank));
        }
        match rest.len() {
            0 => SymGroup::Trivial,
            1 => rest.pop().unwrap(),
            _ => SymGroup::DirectProduct(rest),
        }
    }

    pub fn free(n: usize) -> SymGroup {
        if n == 0 {
            SymGroup::Trivial
        } else {
            SymGroup::FreeAbelian(n)
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == SymGroup::Trivial
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SymGroup::Unknown(_))
    }

    /// Free rank of the abelianization when it is determined by the expression.
    fn abelian_rank(&self) -> Option<usize> {
        match self {
            SymGroup::Trivial => Some(0),
            SymGroup::FreeAbelian(n) => Some(*n),
            SymGroup::DirectProduct(v) => v.iter().map(SymGroup::abelian_rank).sum(),
            _ => None,
        }
    }
}

impl fmt::Display for SymGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymGroup::Trivial => f.write_str("trivial"),
            SymGroup::FreeAbelian(1) => f.write_str("Z"),
            SymGroup::FreeAbelian(n) => write!(f, "Z^{n}"),
            SymGroup::NamedAtom(s) => f.write_str(s),
            SymGroup::DirectProduct(v) => {
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
            SymGroup::Unknown(r) => write!(f, "unknown({r})"),
        }
    }
}

/// Merge data for a symbolic coarsening: `into[s]` is the fine stratum that
/// represents the coarse stratum containing `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MergeSpec {
    pub into: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymSpace {
    Atom(String),
    Cone(Box<SymSpace>),
    ProdEuclid(usize, Box<SymSpace>),
    JoinSphere(usize, Box<SymSpace>),
    Coarsen(Box<SymSpace>, MergeSpec),
}

impl SymSpace {
    pub fn atom(name: &str) -> SymSpace {
        SymSpace::Atom(name.into())
    }

    pub fn cone(self) -> SymSpace {
        SymSpace::Cone(Box::new(self))
    }

    pub fn times_euclidean(self, a: usize) -> SymSpace {
        SymSpace::ProdEuclid(a, Box::new(self))
    }

    pub fn join_sphere(self, m: usize) -> SymSpace {
        SymSpace::JoinSphere(m, Box::new(self))
    }

    pub fn coarsen(self, into: Vec<usize>) -> SymSpace {
        SymSpace::Coarsen(Box::new(self), MergeSpec { into })
    }
}

impl fmt::Display for SymSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymSpace::Atom(n) => f.write_str(n),
            SymSpace::Cone(x) => write!(f, "c({x})"),
            SymSpace::ProdEuclid(a, x) => write!(f, "R^{a} x {x}"),
            SymSpace::JoinSphere(m, x) => write!(f, "S^{m} * {x}"),
            SymSpace::Coarsen(x, spec) => {
                write!(f, "coarsen({x};")?;
                for (i, t) in spec.into.iter().enumerate() {
                    write!(f, "{}{t}", if i == 0 { " " } else { "," })?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse space at byte {at}: {message}")]
pub struct ParseSpaceError {
    pub at: usize,
    pub message: String,
}

struct SpaceParser<'a> {
    src: &'a str,
    pos: usize,
}

impl SpaceParser<'_> {
    fn fail<T>(&self, message: &str) -> Result<T, ParseSpaceError> {
        Err(ParseSpaceError { at: self.pos, message: message.into() })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseSpaceError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.fail(&format!("expected {token:?}"))
        }
    }

    fn number(&mut self) -> Result<usize, ParseSpaceError> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.fail("expected a number");
        }
        let v = self.rest()[..len].parse().map_err(|_| ParseSpaceError { at: self.pos, message: "number too large".into() })?;
        self.pos += len;
        Ok(v)
    }

    /// `S^m`/`R^a` prefix: only when a digit follows the caret.
    fn power(&mut self, letter: char) -> Option<usize> {
        self.skip_ws();
        let r = self.rest();
        let mut it = r.chars();
        if it.next() == Some(letter) && it.next() == Some('^') && it.next().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 2;
            self.number().ok()
        } else {
            None
        }
    }

    fn space(&mut self) -> Result<SymSpace, ParseSpaceError> {
        if let Some(m) = self.power('S') {
            self.expect("*")?;
            return Ok(self.space()?.join_sphere(m));
        }
        if let Some(a) = self.power('R') {
            self.expect("x")?;
            return Ok(self.space()?.times_euclidean(a));
        }
        if self.eat("coarsen(") {
            let x = self.space()?;
            self.expect(";")?;
            let mut into = vec![self.number()?];
            while self.eat(",") {
                into.push(self.number()?);
            }
            self.expect(")")?;
            return Ok(x.coarsen(into));
        }
        if self.eat("c(") {
            let x = self.space()?;
            self.expect(")")?;
            return Ok(x.cone());
        }
        if self.eat("(") {
            let x = self.space()?;
            self.expect(")")?;
            return Ok(x);
        }
        self.skip_ws();
        let len = self.rest().find(|c: char| c.is_whitespace() || "(),;*".contains(c)).unwrap_or(self.rest().len());
        if len == 0 {
            return self.fail("expected an atom name");
        }
        let start = self.pos;
        self.pos += len;
        Ok(SymSpace::atom(&self.src[start..self.pos]))
    }
}

/// Reads the notation produced by `Display`.
impl FromStr for SymSpace {
    type Err = ParseSpaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = SpaceParser { src: s, pos: 0 };
        let x = p.space()?;
        p.skip_ws();
        if p.pos != s.len() {
            return p.fail("trailing input");
        }
        Ok(x)
    }
}

/// A symbolic stratum. Singular strata carry their link together with the
/// ambient stratum of each link stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymStratum {
    pub dim: usize,
    pub link: Option<(SymSpace, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataMeta {
    pub formal_dim: usize,
    pub strata: Vec<SymStratum>,
    le: Vec<Vec<bool>>,
}

impl StrataMeta {
    pub fn poset(&self) -> StrataPoset {
        StrataPoset::new(self.formal_dim, self.strata.iter().map(|s| s.dim).collect(), self.le.clone())
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn regular_count(&self) -> usize {
        self.strata.iter().filter(|s| s.dim == self.formal_dim).count()
    }
}

/// Invariants of a declared atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomDecl {
    pub name: String,
    pub dim: usize,
    /// Singular strata as `(dim, link atom)`; link atoms are unstratified.
    pub singular: Vec<(usize, String)>,
    pub regular_components: usize,
    /// Homotopy groups of the underlying space by degree.
    pub pi: Vec<(usize, SymGroup)>,
    /// Fundamental group of the regular part.
    pub regular_pi1: Option<SymGroup>,
    /// Betti numbers of the underlying space, when declared.
    pub betti: Vec<usize>,
    pub connected: bool,
    pub normal: bool,
    pub pre_thom_mather: bool,
    pub provenance: Provenance,
}

impl AtomDecl {
    /// An unstratified connected manifold with the given homotopy groups.
    pub fn manifold(name: &str, dim: usize, pi: Vec<(usize, SymGroup)>, betti: Vec<usize>) -> AtomDecl {
        AtomDecl {
            name: name.into(),
            dim,
            singular: Vec::new(),
            regular_components: 1,
            pi,
            regular_pi1: None,
            betti,
            connected: true,
            normal: true,
            pre_thom_mather: true,
            provenance: Provenance::Declared,
        }
    }

    /// The sphere `S^n` with its textbook low-degree groups.
    pub fn sphere(n: usize) -> AtomDecl {
        let pi = (0..=n).map(|l| (l, if l == n && n > 0 { SymGroup::free(1) } else { SymGroup::Trivial })).collect();
        let mut betti = vec![0; n + 1];
        betti[0] = 1;
        betti[n] += 1;
        let mut d = AtomDecl::manifold(&format!("S{n}"), n, pi, betti);
        if n == 0 {
            d.connected = false;
            d.regular_components = 2;
            d.pi.clear();
        }
        d
    }

    fn pi(&self, l: usize) -> Option<&SymGroup> {
        self.pi.iter().find(|e| e.0 == l).map(|e| &e.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Produced by the rules.
    Derived,
    /// An atom invariant.
    Declared,
    /// Recorded from the literature; never overridden.
    Paper,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Derived => "derived",
            Provenance::Declared => "declared",
            Provenance::Paper => "paper",
        })
    }
}

/// What a fact asserts about the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    Is(SymGroup),
    IsNot(SymGroup),
}

impl Claim {
    fn unknown(reason: impl Into<String>) -> Claim {
        Claim::Is(SymGroup::Unknown(reason.into()))
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Claim::Is(SymGroup::Unknown(_)))
    }

    /// Two claims that cannot both hold.
    pub fn contradicts(&self, other: &Claim) -> bool {
        match (self, other) {
            (Claim::Is(a), Claim::Is(b)) => !a.is_unknown() && !b.is_unknown() && a != b,
            (Claim::Is(a), Claim::IsNot(b)) | (Claim::IsNot(b), Claim::Is(a)) => a == b,
            (Claim::IsNot(_), Claim::IsNot(_)) => false,
        }
    }

    /// Reading of a `π_1` claim about a cone on a link.
    pub fn link_fact(&self) -> LinkFact {
        match self {
            Claim::Is(SymGroup::Trivial) => LinkFact::Trivial,
            Claim::Is(SymGroup::Unknown(_)) => LinkFact::Unknown,
            Claim::Is(_) | Claim::IsNot(SymGroup::Trivial) => LinkFact::Nontrivial,
            Claim::IsNot(_) => LinkFact::Unknown,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Is(g) => write!(f, "= {g}"),
            Claim::IsNot(g) => write!(f, "!= {g}"),
        }
    }
}

/// One rule application and the hypotheses it checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: &'static str,
    pub certificate: String,
}

/// `π_ℓ^p(space)` with its derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub space: SymSpace,
    pub perversity: Vec<ExtInt>,
    pub degree: usize,
    pub claim: Claim,
    pub provenance: Provenance,
    pub chain: Vec<Step>,
}

impl Fact {
    fn same_request(&self, other: &Fact) -> bool {
        self.degree == other.degree && self.perversity == other.perversity && self.space == other.space
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi[{}]^{{", self.degree)?;
        for (i, v) in self.perversity.iter().enumerate() {
            write!(f, "{}{v}", if i == 0 { "" } else { "," })?;
        }
        write!(f, "}}({}) {}  via ", self.space, self.claim)?;
        for (i, s) in self.chain.iter().enumerate() {
            write!(f, "{}{}[{}]", if i == 0 { "" } else { " <- " }, s.rule, s.certificate)?;
        }
        Ok(())
    }
}

/// Perversity for a coarsening rule, given on either side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SidedPerversity {
    Fine(Vec<ExtInt>),
    Coarse(Vec<ExtInt>),
}

/// Symbolic analogue of the coarsening hypothesis report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymHypotheses {
    pub classes: Vec<StratumClass>,
    pub fine: Vec<ExtInt>,
    pub coarse: Vec<ExtInt>,
    pub k_perversity: bool,
    pub below_top: bool,
    pub coarse_below_top: bool,
    pub normal: bool,
    pub connected: bool,
    pub pre_thom_mather: bool,
    pub link_facts: Vec<(usize, LinkFact)>,
    pub coarsening_invariance: Applicability,
    pub exceptional_invariance: Applicability,
    pub refinement_invariance: Applicability,
    pub refinement_with_exceptional: Applicability,
}

impl SymHypotheses {
    pub fn exceptional(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&s| self.classes[s].is_exceptional()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub requests_checked: usize,
    pub contradictions: Vec<(Fact, Fact)>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.contradictions.is_empty()
    }
}

/// Atom table plus an append-only fact base.
#[derive(Clone, Debug, Default)]
pub struct Calculator {
    atoms: BTreeMap<String, AtomDecl>,
    facts: Vec<Fact>,
}

impl Calculator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &AtomDecl> {
        self.atoms.values()
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// Registers an atom after checking its invariants against each other.
    pub fn declare_atom(&mut self, decl: AtomDecl) -> Result<SymSpace, SymError> {
        let bad = |reason: String| SymError::InconsistentDeclaration { atom: decl.name.clone(), reason };
        if self.atoms.contains_key(&decl.name) {
            return Err(SymError::DuplicateAtom(decl.name.clone()));
        }
        if let Some(&b0) = decl.betti.first() {
            if (b0 == 1) != decl.connected {
                return Err(bad(format!("H_0 has rank {b0} but connected = {}", decl.connected)));
            }
        }
        if let Some(pi0) = decl.pi(0) {
            if pi0.is_trivial() != decl.connected {
                return Err(bad("pi_0 disagrees with connectedness".into()));
            }
        }
        if let (Some(pi1), Some(&b1)) = (decl.pi(1), decl.betti.get(1)) {
            if let Some(r) = pi1.abelian_rank() {
                if r != b1 {
                    return Err(bad(format!("pi_1 abelianizes to rank {r} but H_1 has rank {b1}")));
                }
            }
        }
        if decl.betti.len() > decl.dim + 1 {
            return Err(bad("homology above the dimension".into()));
        }
        if decl.regular_components == 0 {
            return Err(bad("no regular part".into()));
        }
        for (d, link) in &decl.singular {
            if *d >= decl.dim {
                return Err(bad(format!("singular stratum of dimension {d}")));
            }
            let l = self.atoms.get(link).ok_or_else(|| SymError::UnknownAtom(link.clone()))?;
            if !l.singular.is_empty() {
                return Err(bad(format!("link {link} is stratified")));
            }
            if l.dim + d + 1 != decl.dim {
                return Err(bad(format!("link {link} has dimension {} at a stratum of dimension {d}", l.dim)));
            }
            if !l.connected && decl.normal {
                return Err(bad(format!("declared normal but link {link} is disconnected")));
            }
        }
        let space = SymSpace::Atom(decl.name.clone());
        for (l, g) in &decl.pi {
            if decl.singular.is_empty() {
                let perversity = vec![ExtInt::ZERO; decl.regular_components];
                self.facts.push(Fact {
                    space: space.clone(),
                    perversity,
                    degree: *l,
                    claim: Claim::Is(g.clone()),
                    provenance: decl.provenance.max(Provenance::Declared),
                    chain: vec![Step { rule: "atom", certificate: format!("{} declares pi_{l}", decl.name) }],
                });
            }
        }
        self.atoms.insert(decl.name.clone(), decl);
        Ok(space)
    }

    /// Records a fact from the literature. Its perversity must fit the space.
    pub fn record_paper(
        &mut self,
        space: SymSpace,
        perversity: Vec<ExtInt>,
        degree: usize,
        claim: Claim,
        note: &str,
    ) -> Result<(), SymError> {
        let meta = self.meta(&space)?;
        check_perversity(&meta, &perversity)?;
        self.facts.push(Fact {
            space,
            perversity,
            degree,
            claim,
            provenance: Provenance::Paper,
            chain: vec![Step { rule: "paper", certificate: note.into() }],
        });
        Ok(())
    }

    /// Symbolic strata of a space.
    pub fn meta(&self, space: &SymSpace) -> Result<StrataMeta, SymError> {
        match space {
            SymSpace::Atom(name) => {
                let a = self.atoms.get(name).ok_or_else(|| SymError::UnknownAtom(name.clone()))?;
                let k = a.singular.len();
                let n = k + a.regular_components;
                let mut strata = Vec::with_capacity(n);
                for (d, link) in &a.singular {
                    let l = &self.atoms[link];
                    // every stratum of an unstratified link lies in the first regular stratum
                    strata.push(SymStratum { dim: *d, link: Some((SymSpace::Atom(link.clone()), vec![k; l.regular_components])) });
                }
                strata.extend((0..a.regular_components).map(|_| SymStratum { dim: a.dim, link: None }));
                let le = (0..n).map(|i| (0..n).map(|j| i == j || (i < k && j >= k)).collect()).collect();
                Ok(StrataMeta { formal_dim: a.dim, strata, le })
            }
            SymSpace::Cone(x) => {
                let m = self.meta(x)?;
                let n = m.len() + 1;
                let mut strata = vec![SymStratum { dim: 0, link: Some(((**x).clone(), (1..n).collect())) }];
                strata.extend(m.strata.iter().map(|s| shifted(s, 1, 1)));
                let le = (0..n).map(|i| (0..n).map(|j| i == 0 || (j > 0 && m.le[i - 1][j - 1])).collect()).collect();
                Ok(StrataMeta { formal_dim: m.formal_dim + 1, strata, le })
            }
            SymSpace::ProdEuclid(a, x) => {
                let m = self.meta(x)?;
                let strata = m.strata.iter().map(|s| shifted(s, *a, 0)).collect();
                Ok(StrataMeta { formal_dim: m.formal_dim + a, strata, le: m.le })
            }
            SymSpace::JoinSphere(dim, x) => {
                let m = self.meta(x)?;
                // S^0 is two points, so the new bottom has two components
                let b = if *dim == 0 { 2 } else { 1 };
                let n = m.len() + b;
                let mut strata: Vec<SymStratum> =
                    (0..b).map(|_| SymStratum { dim: *dim, link: Some(((**x).clone(), (b..n).collect())) }).collect();
                strata.extend(m.strata.iter().map(|s| shifted(s, dim + 1, b)));
                let le = (0..n)
                    .map(|i| (0..n).map(|j| i == j || (i < b && j >= b) || (i >= b && j >= b && m.le[i - b][j - b])).collect())
                    .collect();
                Ok(StrataMeta { formal_dim: m.formal_dim + dim + 1, strata, le })
            }
            SymSpace::Coarsen(x, spec) => {
                let m = self.meta(x)?;
                let (reps, map) = merge_map(&m, spec)?;
                let n = reps.len();
                let mut le = vec![vec![false; n]; n];
                for a in 0..m.len() {
                    for b in 0..m.len() {
                        if m.le[a][b] {
                            le[map[a]][map[b]] = true;
                        }
                    }
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            if le[i][k] && le[k][j] {
                                le[i][j] = true;
                            }
                        }
                    }
                }
                let strata = reps
                    .iter()
                    .map(|&r| {
                        let s = &m.strata[r];
                        // the link keeps its own strata; values are read through the map
                        let link = if s.dim == m.formal_dim {
                            None
                        } else {
                            s.link.as_ref().map(|(l, lm)| (l.clone(), lm.iter().map(|&j| map[j]).collect()))
                        };
                        SymStratum { dim: s.dim, link }
                    })
                    .collect();
                Ok(StrataMeta { formal_dim: m.formal_dim, strata, le })
            }
        }
    }

    /// Fine strata classes and the fine → coarse map of a coarsened space.
    pub fn classify(&self, space: &SymSpace) -> Result<(Vec<StratumClass>, Vec<usize>), SymError> {
        let SymSpace::Coarsen(x, spec) = space else { return Err(SymError::NotACoarsening) };
        let fine = self.meta(x)?;
        let coarse = self.meta(space)?;
        let (_, map) = merge_map(&fine, spec)?;
        Ok((classify(&fine.poset(), &coarse.poset(), &map), map))
    }

    fn connected(&self, space: &SymSpace) -> Result<bool, SymError> {
        Ok(match space {
            SymSpace::Atom(n) => self.atoms.get(n).ok_or_else(|| SymError::UnknownAtom(n.clone()))?.connected,
            SymSpace::Cone(_) | SymSpace::JoinSphere(..) => true,
            SymSpace::ProdEuclid(_, x) | SymSpace::Coarsen(x, _) => self.connected(x)?,
        })
    }

    /// All links connected, recursively.
    pub fn normal(&self, space: &SymSpace) -> Result<bool, SymError> {
        if let SymSpace::Atom(n) = space {
            return Ok(self.atoms.get(n).ok_or_else(|| SymError::UnknownAtom(n.clone()))?.normal);
        }
        for s in self.meta(space)?.strata {
            if let Some((l, _)) = s.link {
                if !self.connected(&l)? || !self.normal(&l)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn pre_thom_mather(&self, space: &SymSpace) -> Result<bool, SymError> {
        Ok(match space {
            SymSpace::Atom(n) => self.atoms.get(n).ok_or_else(|| SymError::UnknownAtom(n.clone()))?.pre_thom_mather,
            SymSpace::Cone(x) | SymSpace::ProdEuclid(_, x) | SymSpace::JoinSphere(_, x) | SymSpace::Coarsen(x, _) => {
                self.pre_thom_mather(x)?
            }
        })
    }

    /// Derives `π_ℓ^p(space)` with the rule matching the outer constructor,
    /// falling back to recorded facts. Appends the result to the fact base.
    pub fn derive(&mut self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Result<Fact, SymError> {
        let fact = self.evaluate(space, perversity, degree)?;
        self.facts.push(fact.clone());
        Ok(fact)
    }

    fn evaluate(&mut self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Result<Fact, SymError> {
        let meta = self.meta(space)?;
        check_perversity(&meta, perversity)?;
        match space {
            SymSpace::Cone(_) => self.cone_fact(space, perversity, degree),
            SymSpace::ProdEuclid(..) => self.product_fact(space, perversity, degree),
            SymSpace::Coarsen(..) => self.coarsen_fact(space, SidedPerversity::Coarse(perversity.to_vec()), degree),
            _ if degree == 0 => match self.pi0_fact(space, perversity) {
                Err(SymError::PerversityTooLarge(s)) => {
                    Ok(self.unresolved(space, perversity, 0, "pi0", format!("p exceeds t on stratum {s}")))
                }
                r => r,
            },
            SymSpace::Atom(name) if self.atoms[name].singular.is_empty() => {
                let a = &self.atoms[name];
                let claim = a.pi(degree).cloned().map(Claim::Is).unwrap_or_else(|| Claim::unknown("not declared"));
                Ok(Fact {
                    space: space.clone(),
                    perversity: perversity.to_vec(),
                    degree,
                    claim,
                    provenance: Provenance::Derived,
                    chain: vec![Step { rule: "atom", certificate: format!("{name} is unstratified, so pi^p = pi") }],
                })
            }
            _ => Ok(self.recorded(space, perversity, degree).unwrap_or_else(|| {
                self.unresolved(space, perversity, degree, "lookup", "no rule and no recorded fact".into())
            })),
        }
    }

    fn recorded(&self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Option<Fact> {
        let probe = Fact {
            space: space.clone(),
            perversity: perversity.to_vec(),
            degree,
            claim: Claim::unknown(""),
            provenance: Provenance::Derived,
            chain: Vec::new(),
        };
        let src = self
            .facts
            .iter()
            .filter(|f| f.provenance != Provenance::Derived && f.same_request(&probe))
            .max_by_key(|f| f.provenance)?;
        let mut chain = vec![Step { rule: "recorded", certificate: format!("{} fact", src.provenance) }];
        chain.extend(src.chain.iter().cloned());
        Some(Fact { claim: src.claim.clone(), chain, ..probe })
    }

    fn unresolved(&self, space: &SymSpace, perversity: &[ExtInt], degree: usize, rule: &'static str, why: String) -> Fact {
        Fact {
            space: space.clone(),
            perversity: perversity.to_vec(),
            degree,
            claim: Claim::unknown(why.clone()),
            provenance: Provenance::Derived,
            chain: vec![Step { rule, certificate: why }],
        }
    }

    /// The cone rule: `π_ℓ^p(c̊X) = π_ℓ^p(X)` for `ℓ <= Dp(v)`, trivial above.
    /// Degree 0 with `Dp(v) < 0` is left unknown.
    pub fn rule_cone(&mut self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Result<Fact, SymError> {
        let fact = self.cone_fact(space, perversity, degree)?;
        self.facts.push(fact.clone());
        Ok(fact)
    }

    fn cone_fact(&mut self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Result<Fact, SymError> {
        let SymSpace::Cone(base) = space else { return Err(SymError::InvalidMerge("rule_cone needs a cone".into())) };
        let meta = self.meta(space)?;
        check_perversity(&meta, perversity)?;
        let top = meta.formal_dim as i64 - 2;
        let dual = Finite(top).checked_sub(perversity[0]).expect("top is finite");
        let l = Finite(degree as i64);
        let mut fact = Fact {
            space: space.clone(),
            perversity: perversity.to_vec(),
            degree,
            claim: Claim::Is(SymGroup::Trivial),
            provenance: Provenance::Derived,
            chain: Vec::new(),
        };
        if degree == 0 && dual < ExtInt::ZERO {
            let why = format!("degree 0 with Dp(v) = {dual} < 0");
            fact.claim = Claim::unknown(why.clone());
            fact.chain.push(Step { rule: "cone", certificate: why });
        } else if l > dual {
            fact.chain.push(Step { rule: "cone", certificate: format!("l = {degree} > Dp(v) = {dual}") });
        } else {
            let below = self.evaluate(base, &perversity[1..], degree)?;
            fact.claim = below.claim;
            fact.chain.push(Step { rule: "cone", certificate: format!("l = {degree} <= Dp(v) = {dual}") });
            fact.chain.extend(below.chain);
        }
        Ok(fact)
    }

    /// Euclidean factors do not change intersection homotopy groups.
    pub fn rule_product(&mut self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Result<Fact, SymError> {
        let fact = self.product_fact(space, perversity, degree)?;
        self.facts.push(fact.clone());
        Ok(fact)
    }

    fn product_fact(&mut self, space: &SymSpace, perversity: &[ExtInt], degree: usize) -> Result<Fact, SymError> {
        let SymSpace::ProdEuclid(a, base) = space else {
            return Err(SymError::InvalidMerge("rule_product needs a product".into()));
        };
        let below = self.evaluate(base, perversity, degree)?;
        let mut chain = vec![Step { rule: "product", certificate: format!("R^{a} is contractible") }];
        chain.extend(below.chain);
        Ok(Fact {
            space: space.clone(),
            perversity: perversity.to_vec(),
            degree,
            claim: below.claim,
            provenance: Provenance::Derived,
            chain,
        })
    }

    /// `π_0^p` is the set of components of the regular part when `p <= t`.
    pub fn rule_pi0(&mut self, space: &SymSpace, perversity: &[ExtInt]) -> Result<Fact, SymError> {
        let fact = self.pi0_fact(space, perversity)?;
        self.facts.push(fact.clone());
        Ok(fact)
    }

    fn pi0_fact(&self, space: &SymSpace, perversity: &[ExtInt]) -> Result<Fact, SymError> {
        let meta = self.meta(space)?;
        let poset = meta.poset();
        let p = check_perversity(&meta, perversity)?;
        if let Some(s) = p.first_excess(&Perversity::top(&poset)) {
            return Err(SymError::PerversityTooLarge(s));
        }
        let k = meta.regular_count();
        let group = if k == 1 { SymGroup::Trivial } else { SymGroup::NamedAtom(format!("{k} points")) };
        Ok(Fact {
            space: space.clone(),
            perversity: perversity.to_vec(),
            degree: 0,
            claim: Claim::Is(group),
            provenance: Provenance::Derived,
            chain: vec![Step { rule: "pi0", certificate: format!("p <= t and the regular part has {k} components") }],
        })
    }

    /// `π_1^p` of the cone on the link of stratum `s`, with the apex taking `p(s)`.
    pub fn link_fact(&mut self, space: &SymSpace, perversity: &[ExtInt], s: usize) -> Result<(LinkFact, Fact), SymError> {
        let meta = self.meta(space)?;
        let (link, map) = meta.strata[s].link.clone().ok_or(SymError::InvalidMerge(format!("stratum {s} is regular")))?;
        let mut cone_p = vec![perversity[s]];
        cone_p.extend(map.iter().map(|&j| perversity[j]));
        let cone = link.cone();
        let fact = self.derive(&cone, &cone_p, 1)?;
        Ok((fact.claim.link_fact(), fact))
    }

    /// Hypotheses of the invariance statements for a coarsened space.
    pub fn hypotheses(&mut self, space: &SymSpace, perversity: &SidedPerversity) -> Result<SymHypotheses, SymError> {
        let SymSpace::Coarsen(x, _) = space else { return Err(SymError::NotACoarsening) };
        let fine_meta = self.meta(x)?;
        let coarse_meta = self.meta(space)?;
        let (fp, cp) = (fine_meta.poset(), coarse_meta.poset());
        let (classes, map) = self.classify(space)?;
        let (fine, coarse) = match perversity {
            SidedPerversity::Fine(v) => {
                let p = check_perversity(&fine_meta, v)?;
                (p.clone(), Perversity::pushforward(&cp, &map, &p).perversity)
            }
            SidedPerversity::Coarse(v) => {
                let q = check_perversity(&coarse_meta, v)?;
                (Perversity::pullback(&fp, &map, &q), q)
            }
        };
        let k_perversity = fine.is_k_perversity(&fp, &map);
        let below_top = fine.le(&Perversity::top(&fp));
        let coarse_below_top = coarse.le(&Perversity::top(&cp));
        let normal = self.normal(x)?;
        let connected = self.connected(x)?;
        let pre_thom_mather = self.pre_thom_mather(x)?;
        let mut link_facts = Vec::new();
        for s in (0..classes.len()).filter(|&s| classes[s].is_exceptional()) {
            link_facts.push((s, self.link_fact(x, fine.values(), s)?.0));
        }
        let no_exceptional = link_facts.is_empty();
        let no_one_exceptional = !classes.contains(&StratumClass::OneExceptional);
        let links_trivial = link_facts.iter().all(|f| f.1 == LinkFact::Trivial);
        let links = "exceptional links have simply connected cones";
        Ok(SymHypotheses {
            coarsening_invariance: applicability(&[
                ("K-perversity", k_perversity),
                ("p <= t", below_top),
                ("no exceptional strata", no_exceptional),
            ]),
            exceptional_invariance: applicability(&[
                ("K-perversity", k_perversity),
                ("p <= t", below_top),
                ("normal", normal),
                ("connected", connected),
                ("pre-Thom-Mather", pre_thom_mather),
                (links, links_trivial),
            ]),
            refinement_invariance: applicability(&[("q <= t", coarse_below_top), ("no exceptional strata", no_exceptional)]),
            refinement_with_exceptional: applicability(&[
                ("q <= t", coarse_below_top),
                ("normal", normal),
                ("connected", connected),
                ("pre-Thom-Mather", pre_thom_mather),
                ("no 1-exceptional strata", no_one_exceptional),
                (links, links_trivial),
            ]),
            classes,
            fine: fine.values().to_vec(),
            coarse: coarse.values().to_vec(),
            k_perversity,
            below_top,
            coarse_below_top,
            normal,
            connected,
            pre_thom_mather,
            link_facts,
        })
    }

    /// Transfers `π_ℓ` across a coarsening when an invariance statement
    /// applies, and records an unknown naming the failed hypotheses otherwise.
    /// The resulting fact lives on the coarse side.
    pub fn rule_coarsen(&mut self, space: &SymSpace, perversity: SidedPerversity, degree: usize) -> Result<Fact, SymError> {
        let fact = self.coarsen_fact(space, perversity, degree)?;
        self.facts.push(fact.clone());
        Ok(fact)
    }

    fn coarsen_fact(&mut self, space: &SymSpace, perversity: SidedPerversity, degree: usize) -> Result<Fact, SymError> {
        let SymSpace::Coarsen(x, _) = space else { return Err(SymError::NotACoarsening) };
        let h = self.hypotheses(space, &perversity)?;
        let options: [(&str, &Applicability); 2] = match perversity {
            SidedPerversity::Fine(_) => {
                [("coarsening invariance", &h.coarsening_invariance), ("exceptional invariance", &h.exceptional_invariance)]
            }
            SidedPerversity::Coarse(_) => [
                ("refinement invariance", &h.refinement_invariance),
                ("refinement with exceptional strata", &h.refinement_with_exceptional),
            ],
        };
        let mut fact = Fact {
            space: space.clone(),
            perversity: h.coarse.clone(),
            degree,
            claim: Claim::unknown(""),
            provenance: Provenance::Derived,
            chain: Vec::new(),
        };
        if let Some((name, _)) = options.iter().find(|o| o.1.applies) {
            let below = self.evaluate(x, &h.fine, degree)?;
            fact.claim = below.claim;
            fact.chain.push(Step { rule: "coarsen", certificate: format!("{name}: all hypotheses hold") });
            fact.chain.extend(below.chain);
        } else {
            let mut why = String::new();
            for (name, a) in options {
                if !why.is_empty() {
                    why.push_str("; ");
                }
                why.push_str(&format!("{name} fails: {}", a.failed.join(", ")));
            }
            fact.claim = Claim::unknown(why.clone());
            fact.chain.push(Step { rule: "coarsen", certificate: why });
        }
        Ok(fact)
    }

    /// Compares every pair of facts about the same request.
    pub fn consistency_check(&self) -> ConsistencyReport {
        let mut contradictions = Vec::new();
        let mut requests = 0;
        let mut seen = vec![false; self.facts.len()];
        for i in 0..self.facts.len() {
            if seen[i] {
                continue;
            }
            let group: Vec<usize> = (i..self.facts.len()).filter(|&j| self.facts[j].same_request(&self.facts[i])).collect();
            for &j in &group {
                seen[j] = true;
            }
            if group.len() < 2 {
                continue;
            }
            requests += 1;
            for (a, &x) in group.iter().enumerate() {
                for &y in &group[a + 1..] {
                    if self.facts[x].claim.contradicts(&self.facts[y].claim) {
                        contradictions.push((self.facts[x].clone(), self.facts[y].clone()));
                    }
                }
            }
        }
        ConsistencyReport { requests_checked: requests, contradictions }
    }

    /// One line per fact.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for f in &self.facts {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }
}

fn applicability(checks: &[(&'static str, bool)]) -> Applicability {
    let failed: Vec<&'static str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Applicability { applies: failed.is_empty(), failed }
}

fn shifted(s: &SymStratum, by: usize, offset: usize) -> SymStratum {
    SymStratum { dim: s.dim + by, link: s.link.as_ref().map(|(l, m)| (l.clone(), m.iter().map(|j| j + offset).collect())) }
}

fn check_perversity(meta: &StrataMeta, values: &[ExtInt]) -> Result<Perversity, SymError> {
    if values.len() != meta.len() {
        return Err(SymError::PerversityLength { expected: meta.len(), got: values.len() });
    }
    Perversity::new(&meta.poset(), values.to_vec()).map_err(|_| {
        let s = (0..meta.len()).find(|&s| meta.strata[s].dim == meta.formal_dim && values[s] != ExtInt::ZERO);
        SymError::NonZeroOnRegular(s.unwrap_or(0))
    })
}

/// Representatives in increasing order and the fine → coarse index map.
fn merge_map(m: &StrataMeta, spec: &MergeSpec) -> Result<(Vec<usize>, Vec<usize>), SymError> {
    let into = &spec.into;
    if into.len() != m.len() {
        return Err(SymError::InvalidMerge(format!("{} targets for {} strata", into.len(), m.len())));
    }
    for (s, &r) in into.iter().enumerate() {
        if r >= m.len() || into[r] != r {
            return Err(SymError::InvalidMerge(format!("stratum {s} maps to {r}, which is not a representative")));
        }
        if m.strata[r].dim < m.strata[s].dim {
            return Err(SymError::InvalidMerge(format!("stratum {s} maps to the lower-dimensional {r}")));
        }
    }
    let reps: Vec<usize> = (0..m.len()).filter(|&s| into[s] == s).collect();
    let map = into.iter().map(|r| reps.binary_search(r).unwrap()).collect();
    Ok((reps, map))
}

/// Dual-to-perversity conversion on a symbolic space: `p = t - d`.
pub fn from_dual(meta: &StrataMeta, dual: &[ExtInt]) -> Vec<ExtInt> {
    meta.strata
        .iter()
        .zip(dual)
        .map(|(s, d)| {
            if s.dim == meta.formal_dim {
                ExtInt::ZERO
            } else {
                Finite(meta.formal_dim as i64 - s.dim as i64 - 2).checked_sub(*d).unwrap_or(PosInf)
            }
        })
        .collect()
}

/// Fixture: a sphere atom for each dimension up to `n`.
pub fn with_spheres(calc: &mut Calculator, n: usize) -> Result<(), SymError> {
    for k in 0..=n {
        calc.declare_atom(AtomDecl::sphere(k))?;
    }
    Ok(())
}

/// The Poincaré homology sphere, with its fundamental group recorded as a
/// nontrivial literature fact.
pub fn poincare_sphere(pi1: SymGroup) -> AtomDecl {
    let mut d = AtomDecl::manifold("P", 3, vec![(0, SymGroup::Trivial), (1, pi1)], vec![1, 0, 0, 1]);
    d.provenance = Provenance::Paper;
    d
}

/// The pinched torus: a sphere with two points identified.
pub fn pinched_torus_atom() -> AtomDecl {
    AtomDecl {
        name: "T".into(),
        dim: 2,
        singular: vec![(0, "S1+S1".into())],
        regular_components: 1,
        pi: vec![(0, SymGroup::Trivial), (1, SymGroup::free(1))],
        regular_pi1: Some(SymGroup::free(1)),
        betti: vec![1, 1, 1],
        connected: true,
        normal: false,
        pre_thom_mather: true,
        provenance: Provenance::Paper,
    }
}

/// Two disjoint circles, the link of the pinch point.
pub fn two_circles_atom() -> AtomDecl {
    let mut d = AtomDecl::manifold("S1+S1", 1, Vec::new(), vec![2, 2]);
    d.connected = false;
    d.regular_components = 2;
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extint::NegInf;

    fn calc() -> Calculator {
        let mut c = Calculator::new();
        with_spheres(&mut c, 5).unwrap();
        c.declare_atom(poincare_sphere(SymGroup::NamedAtom("binary-icosahedral".into()))).unwrap();
        c.declare_atom(two_circles_atom()).unwrap();
        c.declare_atom(pinched_torus_atom()).unwrap();
        c
    }

    #[test]
    fn group_products_flatten() {
        let g = SymGroup::product([
            SymGroup::Trivial,
            SymGroup::FreeAbelian(2),
            SymGroup::DirectProduct(vec![SymGroup::FreeAbelian(1), SymGroup::NamedAtom("G".into())]),
        ]);
        assert_eq!(g, SymGroup::DirectProduct(vec![SymGroup::FreeAbelian(3), SymGroup::NamedAtom("G".into())]));
        assert_eq!(SymGroup::product([SymGroup::Trivial]), SymGroup::Trivial);
        assert_eq!(g.to_string(), "Z^3 x G");
    }

    #[test]
    fn inconsistent_atom_rejected() {
        let mut c = calc();
        let bad = AtomDecl::manifold("Bad", 2, vec![(1, SymGroup::free(1))], vec![1, 0, 1]);
        assert!(matches!(c.declare_atom(bad), Err(SymError::InconsistentDeclaration { .. })));
        assert_eq!(c.declare_atom(AtomDecl::sphere(2)), Err(SymError::DuplicateAtom("S2".into())));
    }

    #[test]
    fn strata_of_constructors() {
        let c = calc();
        let x = SymSpace::atom("P").join_sphere(0).join_sphere(0);
        let m = c.meta(&x).unwrap();
        assert_eq!(m.formal_dim, 5);
        assert_eq!(m.strata.iter().map(|s| s.dim).collect::<Vec<_>>(), [0, 0, 1, 1, 5]);
        let cone = SymSpace::atom("T").cone();
        let m = c.meta(&cone).unwrap();
        assert_eq!(m.strata.iter().map(|s| s.dim).collect::<Vec<_>>(), [0, 1, 3]);
        let prod = cone.times_euclidean(2);
        assert_eq!(c.meta(&prod).unwrap().formal_dim, 5);
    }

    #[test]
    fn cone_rule_thresholds() {
        let mut c = calc();
        let cone = SymSpace::atom("S2").cone();
        // apex codim 3, t = 1; p = 0 gives Dp = 1
        let f = c.rule_cone(&cone, &[Finite(0), Finite(0)], 1).unwrap();
        assert_eq!(f.claim, Claim::Is(SymGroup::Trivial));
        let f = c.rule_cone(&cone, &[Finite(0), Finite(0)], 2).unwrap();
        assert_eq!(f.claim, Claim::Is(SymGroup::Trivial));
        let cone = SymSpace::atom("S1").cone();
        let f = c.rule_cone(&cone, &[NegInf, Finite(0)], 1).unwrap();
        assert_eq!(f.claim, Claim::Is(SymGroup::free(1)));
        let f = c.rule_cone(&cone, &[PosInf, Finite(0)], 0).unwrap();
        assert!(!f.claim.is_known());
    }

    #[test]
    fn cone_keeps_triviality() {
        let mut c = calc();
        let cone = SymSpace::atom("S3").cone();
        for p in [NegInf, Finite(-1), Finite(0), Finite(1), Finite(2), PosInf] {
            for l in 1..4 {
                let f = c.derive(&cone, &[p, Finite(0)], l).unwrap();
                if l < 3 {
                    assert_eq!(f.claim, Claim::Is(SymGroup::Trivial));
                }
            }
        }
    }

    #[test]
    fn product_paths_agree() {
        let mut c = calc();
        let a = SymSpace::atom("S2").cone().times_euclidean(3);
        let b = SymSpace::atom("S2").times_euclidean(0).cone().times_euclidean(3);
        let fa = c.derive(&a, &[Finite(0), Finite(0)], 1).unwrap();
        let fb = c.derive(&b, &[Finite(0), Finite(0)], 1).unwrap();
        assert_eq!(fa.claim, fb.claim);
        assert!(c.consistency_check().consistent());
    }

    #[test]
    fn pi0_rule() {
        let mut c = calc();
        let t = SymSpace::atom("T");
        assert_eq!(c.rule_pi0(&t, &[Finite(0), Finite(0)]).unwrap().claim, Claim::Is(SymGroup::Trivial));
        assert_eq!(c.rule_pi0(&t, &[Finite(1), Finite(0)]), Err(SymError::PerversityTooLarge(0)));
        let s0 = SymSpace::atom("S1+S1");
        assert_eq!(
            c.rule_pi0(&s0, &[Finite(0), Finite(0)]).unwrap().claim,
            Claim::Is(SymGroup::NamedAtom("2 points".into()))
        );
    }

    #[test]
    fn identity_coarsening_transfers() {
        let mut c = calc();
        let cone = SymSpace::atom("S2").cone();
        let id = cone.clone().coarsen(vec![0, 1]);
        let p = vec![Finite(0), Finite(0)];
        let coarse = c.rule_coarsen(&id, SidedPerversity::Fine(p.clone()), 1).unwrap();
        let fine = c.derive(&cone, &p, 1).unwrap();
        assert_eq!(coarse.claim, fine.claim);
        let back = c.rule_coarsen(&id, SidedPerversity::Coarse(coarse.perversity.clone()), 1).unwrap();
        assert_eq!(back.claim, fine.claim);
    }

    #[test]
    fn empty_fact_base_is_consistent() {
        let c = Calculator::new();
        let r = c.consistency_check();
        assert!(r.consistent());
        assert_eq!(r.requests_checked, 0);
    }

    #[test]
    fn dump_format() {
        let mut c = calc();
        let cone = SymSpace::atom("S2").cone();
        c.derive(&cone, &[Finite(0), Finite(0)], 2).unwrap();
        let line = c.dump().lines().last().unwrap().to_string();
        assert_eq!(line, "pi[2]^{0,0}(c(S2)) = trivial  via cone[l = 2 > Dp(v) = 1]");
    }

    #[test]
    fn double_suspension_of_poincare_sphere() {
        let mut c = calc();
        let fine = SymSpace::atom("P").join_sphere(0).join_sphere(0);
        let meta = c.meta(&fine).unwrap();
        let space = fine.clone().coarsen(vec![4; 5]);
        let (classes, _) = c.classify(&space).unwrap();
        assert_eq!(classes.iter().filter(|k| k.is_exceptional()).count(), 4);
        let p = from_dual(&meta, &[Finite(1); 5]);
        let h = c.hypotheses(&space, &SidedPerversity::Fine(p.clone())).unwrap();
        assert!(h.k_perversity && h.below_top);
        assert_eq!(h.coarse, [ExtInt::ZERO]);
        assert!(h.link_facts.iter().any(|f| f.1 == LinkFact::Nontrivial));
        let f = c.rule_coarsen(&space, SidedPerversity::Fine(p.clone()), 1).unwrap();
        assert!(!f.claim.is_known());
        assert!(f.chain[0].certificate.contains("exceptional links have simply connected cones"));
        c.record_paper(fine, p, 1, Claim::IsNot(SymGroup::Trivial), "double suspension, fine side").unwrap();
        c.record_paper(space, vec![ExtInt::ZERO], 1, Claim::Is(SymGroup::Trivial), "double suspension, coarse side").unwrap();
        assert!(c.consistency_check().consistent());
    }

    #[test]
    fn corrupted_poincare_sphere_is_caught() {
        let mut c = Calculator::new();
        with_spheres(&mut c, 3).unwrap();
        c.declare_atom(poincare_sphere(SymGroup::Trivial)).unwrap();
        c.record_paper(SymSpace::atom("P"), vec![ExtInt::ZERO], 1, Claim::IsNot(SymGroup::Trivial), "Poincare sphere").unwrap();
        assert!(!c.consistency_check().consistent());
    }

    #[test]
    fn pinched_torus_cone() {
        let mut c = calc();
        let cone = SymSpace::atom("T").cone();
        // apex codim 3: p(v) = 1 gives Dp(v) = 0
        for l in 1..5 {
            let f = c.rule_cone(&cone, &[Finite(1), Finite(0), Finite(0)], l).unwrap();
            assert_eq!(f.claim, Claim::Is(SymGroup::Trivial));
        }
        let space = SymSpace::atom("T").coarsen(vec![1, 1]);
        let h = c.hypotheses(&space, &SidedPerversity::Fine(vec![Finite(0), Finite(0)])).unwrap();
        assert_eq!(h.link_facts, [(0, LinkFact::Trivial)]);
        assert!(!h.coarsening_invariance.applies);
        assert_eq!(h.exceptional_invariance.failed, ["normal"]);
    }

    #[test]
    fn space_notation_round_trips() {
        let spaces = [
            SymSpace::atom("P").join_sphere(0).join_sphere(0).coarsen(vec![4; 5]),
            SymSpace::atom("S1+S1").cone().times_euclidean(3),
            SymSpace::atom("T").cone(),
        ];
        for x in spaces {
            assert_eq!(x.to_string().parse::<SymSpace>().unwrap(), x);
        }
        assert_eq!("c((S2))".parse::<SymSpace>().unwrap(), SymSpace::atom("S2").cone());
        assert!("c(S2".parse::<SymSpace>().is_err());
        assert!("coarsen(S2; )".parse::<SymSpace>().is_err());
    }

    #[test]
    fn conflicting_claims() {
        let a = Claim::Is(SymGroup::Trivial);
        assert!(a.contradicts(&Claim::IsNot(SymGroup::Trivial)));
        assert!(!a.contradicts(&Claim::unknown("x")));
        assert!(a.contradicts(&Claim::Is(SymGroup::free(1))));
    }
}
