//! Coarsenings of a stratification, the classification of fine strata, the
//! factorization through the stratification that forgets exceptional strata,
//! and chains of simple coarsenings.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::extint::{ExtInt, Finite, NegInf, PosInf};
use crate::perv::{KViolation, Perversity, Pushforward};
use crate::strat::{StrataPoset, StratError, Stratification};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoarsenError {
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error("formal dimensions differ: {fine} and {coarse}")]
    FormalDimMismatch { fine: usize, coarse: usize },
    #[error("fine stratum {fine} is not contained in coarse stratum {coarse}")]
    NotACoarsening { fine: usize, coarse: usize },
    #[error("fine stratum {fine} has larger dimension than its image {coarse}")]
    DimensionDrops { fine: usize, coarse: usize },
    #[error("coarse stratum {0} has no source stratum")]
    MissingSource(usize),
    #[error("forgetting exceptional strata breaks closedness at stratum {0}")]
    SkeletonNotClosed(usize),
    #[error("the coarsenings do not compose")]
    NotComposable,
    #[error("no chain of simple coarsenings found: {0}")]
    ChainFailure(String),
}

/// Role of a fine stratum in a coarsening.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratumClass {
    /// Singular, but lands in a regular coarse stratum.
    Exceptional,
    /// Exceptional of codimension one.
    OneExceptional,
    /// Singular with the same dimension as its image.
    Source,
    /// Singular with smaller dimension than its singular image.
    Fountain,
    /// A regular stratum.
    RegularSource,
}

impl StratumClass {
    pub fn is_exceptional(self) -> bool {
        matches!(self, StratumClass::Exceptional | StratumClass::OneExceptional)
    }

    pub fn is_source(self) -> bool {
        matches!(self, StratumClass::Source | StratumClass::RegularSource)
    }
}

impl fmt::Display for StratumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumClass::Exceptional => "exceptional",
            StratumClass::OneExceptional => "1-exceptional",
            StratumClass::Source => "source",
            StratumClass::Fountain => "fountain",
            StratumClass::RegularSource => "regular-source",
        })
    }
}

/// Classifies each fine stratum against its image under `map`.
pub fn classify(fine: &StrataPoset, coarse: &StrataPoset, map: &[usize]) -> Vec<StratumClass> {
    map.iter()
        .enumerate()
        .map(|(s, &t)| {
            if fine.is_regular(s) {
                StratumClass::RegularSource
            } else if coarse.is_regular(t) {
                if fine.codim(s) == 1 {
                    StratumClass::OneExceptional
                } else {
                    StratumClass::Exceptional
                }
            } else if fine.dims[s] == coarse.dims[t] {
                StratumClass::Source
            } else {
                StratumClass::Fountain
            }
        })
        .collect()
}

/// Two stratifications of one complex where every fine stratum lies in a
/// coarse stratum of at least its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coarsening {
    fine: Stratification,
    coarse: Stratification,
    map: Vec<usize>,
    classes: Vec<StratumClass>,
}

impl Coarsening {
    pub fn new(fine: Stratification, coarse: Stratification) -> Result<Self, CoarsenError> {
        if fine.complex() != coarse.complex() {
            return Err(StratError::DifferentComplex.into());
        }
        if fine.formal_dim() != coarse.formal_dim() {
            return Err(CoarsenError::FormalDimMismatch { fine: fine.formal_dim(), coarse: coarse.formal_dim() });
        }
        let mut map = vec![usize::MAX; fine.strata().len()];
        for g in 0..fine.complex().num_simplices() {
            let (s, t) = (fine.stratum_of(g), coarse.stratum_of(g));
            if map[s] == usize::MAX {
                map[s] = t;
            } else if map[s] != t {
                return Err(CoarsenError::NotACoarsening { fine: s, coarse: t });
            }
        }
        let (fp, cp) = (fine.poset(), coarse.poset());
        for (s, &t) in map.iter().enumerate() {
            if cp.dims[t] < fp.dims[s] {
                return Err(CoarsenError::DimensionDrops { fine: s, coarse: t });
            }
        }
        let classes = classify(fp, cp, &map);
        for t in 0..cp.len() {
            if !(0..map.len()).any(|s| map[s] == t && classes[s].is_source()) {
                return Err(CoarsenError::MissingSource(t));
            }
        }
        Ok(Coarsening { fine, coarse, map, classes })
    }

    pub fn identity(s: Stratification) -> Self {
        Coarsening::new(s.clone(), s).expect("a stratification coarsens itself")
    }

    pub fn fine(&self) -> &Stratification {
        &self.fine
    }

    pub fn coarse(&self) -> &Stratification {
        &self.coarse
    }

    /// Image of each fine stratum.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn classes(&self) -> &[StratumClass] {
        &self.classes
    }

    pub fn class(&self, s: usize) -> StratumClass {
        self.classes[s]
    }

    fn with_class(&self, f: impl Fn(StratumClass) -> bool) -> Vec<usize> {
        (0..self.classes.len()).filter(|&s| f(self.classes[s])).collect()
    }

    pub fn exceptional(&self) -> Vec<usize> {
        self.with_class(StratumClass::is_exceptional)
    }

    pub fn one_exceptional(&self) -> Vec<usize> {
        self.with_class(|c| c == StratumClass::OneExceptional)
    }

    pub fn fountains(&self) -> Vec<usize> {
        self.with_class(|c| c == StratumClass::Fountain)
    }

    pub fn preimage(&self, t: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&s| self.map[s] == t).collect()
    }

    pub fn sources_of(&self, t: usize) -> Vec<usize> {
        self.preimage(t).into_iter().filter(|&s| self.classes[s].is_source()).collect()
    }

    /// Exceptional and fountain strata.
    pub fn moving_strata(&self) -> Vec<usize> {
        self.with_class(|c| c.is_exceptional() || c == StratumClass::Fountain)
    }

    /// The exceptional and fountain strata form a poset of depth at most one.
    pub fn is_simple(&self) -> bool {
        self.fine.poset().sub_depth(&self.moving_strata()) <= 1
    }

    pub fn is_identity(&self) -> bool {
        self.fine.levels() == self.coarse.levels()
    }

    pub fn compose(&self, next: &Coarsening) -> Result<Coarsening, CoarsenError> {
        if self.coarse != next.fine {
            return Err(CoarsenError::NotComposable);
        }
        Coarsening::new(self.fine.clone(), next.coarse.clone())
    }

    pub fn pushforward(&self, p: &Perversity) -> Pushforward {
        Perversity::pushforward(self.coarse.poset(), &self.map, p)
    }

    pub fn pullback(&self, q: &Perversity) -> Perversity {
        Perversity::pullback(self.fine.poset(), &self.map, q)
    }

    pub fn k_violation(&self, p: &Perversity) -> Option<KViolation> {
        p.k_violation(self.fine.poset(), &self.map)
    }

    pub fn is_k_perversity(&self, p: &Perversity) -> bool {
        self.k_violation(p).is_none()
    }
}

/// The factorization `fine → se → coarse` where `se` forgets the exceptional strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalSplit {
    pub se: Stratification,
    pub absorb: Coarsening,
    pub remaining: Coarsening,
}

/// Moves every exceptional simplex to the top level. The first map absorbs
/// the exceptional strata into the regular part; the second has no
/// exceptional strata.
pub fn build_se(c: &Coarsening) -> Result<ExceptionalSplit, CoarsenError> {
    let fine = c.fine();
    let poset = fine.poset();
    let exceptional = c.exceptional();
    // a surviving singular stratum may not have an exceptional one in its closure
    for s in poset.singular() {
        if !c.class(s).is_exceptional() && exceptional.iter().any(|&e| poset.le(e, s)) {
            return Err(CoarsenError::SkeletonNotClosed(s));
        }
    }
    let n = fine.formal_dim();
    let levels: Vec<usize> = (0..fine.levels().len())
        .map(|g| if c.class(fine.stratum_of(g)).is_exceptional() { n } else { fine.level(g) })
        .collect();
    let se = Stratification::from_levels(fine.complex().clone(), n, levels)
        .map_err(|_| CoarsenError::SkeletonNotClosed(exceptional.first().copied().unwrap_or(0)))?;
    let absorb = Coarsening::new(fine.clone(), se.clone())?;
    let remaining = Coarsening::new(se.clone(), c.coarse().clone())?;
    for s in poset.singular() {
        if !c.class(s).is_exceptional() {
            let image = absorb.map()[s];
            assert!(
                absorb.class(s) == StratumClass::Source && se.strata()[image].simplices == fine.strata()[s].simplices,
                "non-exceptional singular strata survive unchanged"
            );
        }
    }
    assert!(remaining.exceptional().is_empty(), "the second factor has no exceptional strata");
    Ok(ExceptionalSplit { se, absorb, remaining })
}

/// Longest chain strictly above each member, inside `members`.
fn heights(poset: &StrataPoset, members: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| poset.dims[members[b]].cmp(&poset.dims[members[a]]));
    let mut h = vec![0usize; members.len()];
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[..i] {
            if poset.lt(members[a], members[b]) {
                h[a] = h[a].max(h[b] + 1);
            }
        }
    }
    h
}

/// Splits a coarsening into simple steps. Exceptional and fountain strata
/// are moved to their coarse level from the top of their poset downwards,
/// two layers per step, so each step's moving strata have depth at most one.
/// The identity gives an empty chain.
pub fn simple_chain(c: &Coarsening) -> Result<Vec<Coarsening>, CoarsenError> {
    let moving = c.moving_strata();
    if moving.is_empty() {
        return Ok(Vec::new());
    }
    let fine = c.fine();
    let h = heights(fine.poset(), &moving);
    let max_h = *h.iter().max().unwrap();
    let mut chain = Vec::new();
    let mut current = fine.clone();
    let mut layer = 0;
    while layer <= max_h {
        let promoted: BTreeSet<usize> = (0..moving.len()).filter(|&i| h[i] <= layer + 1).map(|i| moving[i]).collect();
        let levels: Vec<usize> = (0..fine.levels().len())
            .map(|g| if promoted.contains(&fine.stratum_of(g)) { c.coarse().level(g) } else { fine.level(g) })
            .collect();
        let next = Stratification::from_levels(fine.complex().clone(), fine.formal_dim(), levels)
            .map_err(|e| CoarsenError::ChainFailure(format!("step {}: {e}", chain.len())))?;
        let step = Coarsening::new(current, next.clone())
            .map_err(|e| CoarsenError::ChainFailure(format!("step {}: {e}", chain.len())))?;
        if !step.is_simple() {
            return Err(CoarsenError::ChainFailure(format!("step {} is not simple", chain.len())));
        }
        chain.push(step);
        current = next;
        layer += 2;
    }
    if current.levels() != c.coarse().levels() {
        return Err(CoarsenError::ChainFailure("the chain does not reach the coarse stratification".into()));
    }
    Ok(chain)
}

/// Status of `π_1` of the cone on an exceptional link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkFact {
    Trivial,
    Nontrivial,
    Unknown,
}

impl fmt::Display for LinkFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkFact::Trivial => "trivial",
            LinkFact::Nontrivial => "nontrivial",
            LinkFact::Unknown => "unknown",
        })
    }
}

/// Whether an invariance statement applies, and which hypotheses failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applicability {
    pub applies: bool,
    pub failed: Vec<&'static str>,
}

impl Applicability {
    fn from(checks: &[(&'static str, bool)]) -> Self {
        let failed: Vec<&'static str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
        Applicability { applies: failed.is_empty(), failed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub k_violation: Option<KViolation>,
    /// First stratum where `p > t`, if any.
    pub above_top: Option<usize>,
    /// First coarse stratum where the pushforward exceeds the coarse top perversity.
    pub pushforward_above_top: Option<usize>,
    pub exceptional: Vec<usize>,
    pub one_exceptional: Vec<usize>,
    pub link_facts: Vec<(usize, LinkFact)>,
    pub pre_thom_mather: bool,
    pub normal: bool,
    pub connected: bool,
    /// No exceptional strata, K-perversity below the top perversity.
    pub coarsening_invariance: Applicability,
    /// Exceptional strata allowed when their cone links are simply connected.
    pub exceptional_invariance: Applicability,
    /// Coarse perversity below the top one, no exceptional strata.
    pub refinement_invariance: Applicability,
    /// Coarse perversity below the top one, no 1-exceptional strata, trivial cone links.
    pub refinement_with_exceptional: Applicability,
}

/// Collects the hypotheses of the invariance statements for `(c, p)`.
/// `pre_thom_mather` is declared metadata; `link_fact` reports what is known
/// about `π_1` of the cone on the link of an exceptional stratum.
pub fn theorem_hypothesis_report(
    c: &Coarsening,
    p: &Perversity,
    pre_thom_mather: bool,
    link_fact: &dyn Fn(usize) -> LinkFact,
) -> HypothesisReport {
    let fine = c.fine();
    let k_violation = c.k_violation(p);
    let above_top = p.first_excess(&Perversity::top(fine.poset()));
    let pushed = c.pushforward(p).perversity;
    let pushforward_above_top = pushed.first_excess(&Perversity::top(c.coarse().poset()));
    let exceptional = c.exceptional();
    let one_exceptional = c.one_exceptional();
    let link_facts: Vec<(usize, LinkFact)> = exceptional.iter().map(|&s| (s, link_fact(s))).collect();
    let links_trivial = link_facts.iter().all(|f| f.1 == LinkFact::Trivial);
    let normal = fine.cs_diagnostics().normal();
    let connected = fine.regular_components().1 == 1;
    let k = k_violation.is_none();
    let below = above_top.is_none();
    let q_below = pushforward_above_top.is_none();
    let coarsening_invariance =
        Applicability::from(&[("K-perversity", k), ("p <= t", below), ("no exceptional strata", exceptional.is_empty())]);
    let exceptional_invariance = Applicability::from(&[
        ("K-perversity", k),
        ("p <= t", below),
        ("normal", normal),
        ("connected", connected),
        ("pre-Thom-Mather", pre_thom_mather),
        ("exceptional links have simply connected cones", links_trivial),
    ]);
    let refinement_invariance =
        Applicability::from(&[("q <= t", q_below), ("no exceptional strata", exceptional.is_empty())]);
    let refinement_with_exceptional = Applicability::from(&[
        ("q <= t", q_below),
        ("normal", normal),
        ("connected", connected),
        ("pre-Thom-Mather", pre_thom_mather),
        ("no 1-exceptional strata", one_exceptional.is_empty()),
        ("exceptional links have simply connected cones", links_trivial),
    ]);
    HypothesisReport {
        k_violation,
        above_top,
        pushforward_above_top,
        exceptional,
        one_exceptional,
        link_facts,
        pre_thom_mather,
        normal,
        connected,
        coarsening_invariance,
        exceptional_invariance,
        refinement_invariance,
        refinement_with_exceptional,
    }
}

fn candidates(t: i64) -> Vec<ExtInt> {
    let mut v = vec![NegInf];
    v.extend((-3..=t + 3).map(Finite));
    v.push(PosInf);
    v
}

/// Random values in `[-3, t(S) + 3] ∪ {±inf}` on singular strata.
pub fn random_perversity<R: Rng + ?Sized>(poset: &StrataPoset, rng: &mut R) -> Perversity {
    let values = (0..poset.len())
        .map(|s| {
            if poset.is_regular(s) {
                return ExtInt::ZERO;
            }
            let c = candidates(poset.codim(s) as i64 - 2);
            c[rng.gen_range(0..c.len())]
        })
        .collect();
    Perversity::new(poset, values).expect("regular strata are zero")
}

/// A random K-perversity, built from the top of each fibre downwards so that
/// every choice respects the sandwich bounds against the strata above it.
/// With `below_top` the values also stay below the top perversity. Returns
/// `None` when the bounds leave no room, as with 1-exceptional strata.
pub fn random_k_perversity<R: Rng + ?Sized>(c: &Coarsening, rng: &mut R, below_top: bool) -> Option<Perversity> {
    let poset = c.fine().poset();
    let top = |s: usize| if poset.is_regular(s) { 0 } else { poset.codim(s) as i64 - 2 };
    let mut values: Vec<Option<ExtInt>> = (0..poset.len()).map(|s| poset.is_regular(s).then_some(ExtInt::ZERO)).collect();
    let mut order: Vec<usize> = poset.singular().collect();
    order.sort_by(|&a, &b| poset.dims[b].cmp(&poset.dims[a]).then(c.map()[a].cmp(&c.map()[b])));
    let mut i = 0;
    while i < order.len() {
        // strata with the same image and dimension share one value
        let (t, d) = (c.map()[order[i]], poset.dims[order[i]]);
        let mut j = i;
        while j < order.len() && c.map()[order[j]] == t && poset.dims[order[j]] == d {
            j += 1;
        }
        let class = &order[i..j];
        let ts = top(class[0]);
        let mut lo = NegInf;
        let mut hi = if below_top { Finite(ts) } else { PosInf };
        for &s in class {
            for q in 0..poset.len() {
                if q == s || c.map()[q] != t || !poset.le(s, q) {
                    continue;
                }
                let pq = values[q]?;
                lo = lo.max(pq);
                hi = hi.min(pq.shift(ts - top(q)));
            }
        }
        let choices: Vec<ExtInt> = candidates(ts).into_iter().filter(|v| lo <= *v && *v <= hi).collect();
        if choices.is_empty() {
            return None;
        }
        let v = choices[rng.gen_range(0..choices.len())];
        for &s in class {
            values[s] = Some(v);
        }
        i = j;
    }
    Some(Perversity::new(poset, values.into_iter().map(Option::unwrap).collect()).expect("regular strata are zero"))
}

/// One failed instance of a perversity law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub stratum: usize,
    pub detail: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at stratum {}: {}", self.law, self.stratum, self.detail)
    }
}

fn violation(law: &'static str, stratum: usize, detail: String) -> LawViolation {
    LawViolation { law, stratum, detail }
}

/// Laws relating a K-perversity `p <= t` to its pushforward: the source
/// rule, `ι*Dι_*p <= Dp`, `ι_*Dp = Dι_*p`, `ι_*p <= t`, duality of the
/// K-conditions and `0 <= p <= t` on exceptional strata.
pub fn pushforward_laws(c: &Coarsening, p: &Perversity) -> Vec<LawViolation> {
    let (fp, cp) = (c.fine().poset(), c.coarse().poset());
    let mut out = Vec::new();
    let q = c.pushforward(p).perversity;
    for t in cp.singular() {
        for s in c.sources_of(t) {
            if q.value(t) != p.value(s) {
                out.push(violation("source rule", t, format!("pushforward {} but source {s} has {}", q.value(t), p.value(s))));
            }
        }
    }
    let lhs = c.pullback(&q.dual(cp));
    let dp = p.dual(fp);
    for s in fp.singular() {
        if lhs.value(s) > dp.value(s) {
            out.push(violation("pulled-back dual bound", s, format!("{} > {}", lhs.value(s), dp.value(s))));
        }
    }
    let push_dual = c.pushforward(&dp).perversity;
    let dual_push = q.dual(cp);
    for t in cp.singular() {
        if push_dual.value(t) != dual_push.value(t) {
            out.push(violation("dual commutes with pushforward", t, format!("{} vs {}", push_dual.value(t), dual_push.value(t))));
        }
    }
    if let Some(t) = q.first_excess(&Perversity::top(cp)) {
        out.push(violation("pushforward below top", t, format!("{}", q.value(t))));
    }
    if c.is_k_perversity(p) != c.is_k_perversity(&dp) {
        out.push(violation("K-condition is self-dual", 0, format!("p = {p}")));
    }
    let top = Perversity::top(fp);
    for s in c.exceptional() {
        if !(ExtInt::ZERO <= p.value(s) && p.value(s) <= top.value(s)) {
            out.push(violation("exceptional positivity", s, format!("{}", p.value(s))));
        }
    }
    out
}

/// For `fine → mid → coarse` and a K-perversity on the composite: `p` is a
/// K-perversity on the first step and its pushforward one on the second.
pub fn chain_laws(first: &Coarsening, second: &Coarsening, p: &Perversity) -> Vec<LawViolation> {
    let mut out = Vec::new();
    if let Some(v) = first.k_violation(p) {
        out.push(violation("restriction to first step", v.lower, format!("{v}")));
    }
    let mid = first.pushforward(p).perversity;
    if let Some(v) = second.k_violation(&mid) {
        out.push(violation("pushforward to second step", v.lower, format!("{v}")));
    }
    out
}

/// Pullback of `q <= t` along a coarsening without 1-exceptional strata is
/// a K-perversity below the top perversity, and `ι_*ι*q = q`.
pub fn pullback_laws(c: &Coarsening, q: &Perversity) -> Vec<LawViolation> {
    let mut out = Vec::new();
    let p = c.pullback(q);
    let qt = q.first_excess(&Perversity::top(c.coarse().poset())).is_none();
    if qt && c.one_exceptional().is_empty() {
        if let Some(v) = c.k_violation(&p) {
            out.push(violation("pullback is a K-perversity", v.lower, format!("{v}")));
        }
        if let Some(s) = p.first_excess(&Perversity::top(c.fine().poset())) {
            out.push(violation("pullback below top", s, format!("{}", p.value(s))));
        }
    }
    let back = c.pushforward(&p).perversity;
    if back != *q {
        let t = (0..q.len()).find(|&t| back.value(t) != q.value(t)).unwrap();
        out.push(violation("push after pull", t, format!("{} vs {}", back.value(t), q.value(t))));
    }
    out
}

/// `ι*ι_*p <= p` where the image stays singular and `0` where it turns regular.
pub fn pull_push_laws(c: &Coarsening, p: &Perversity) -> Vec<LawViolation> {
    let back = c.pullback(&c.pushforward(p).perversity);
    let mut out = Vec::new();
    for s in c.fine().poset().singular() {
        let ok = if c.class(s).is_exceptional() { back.value(s) == ExtInt::ZERO } else { back.value(s) <= p.value(s) };
        if !ok {
            out.push(violation("pull after push", s, format!("{} vs {}", back.value(s), p.value(s))));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{Simplex, SimplicialComplex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pinched_torus() -> Stratification {
        // a cylinder of three triangle layers with both ends coned to vertex 9
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
        let c = SimplicialComplex::from_facets(facets).unwrap();
        Stratification::new(c, 2, &[(0, vec![Simplex::vertex(9)])]).unwrap()
    }

    fn real_line_with_point() -> Coarsening {
        let c = SimplicialComplex::from_facets([[1u32, 0], [0, 2]]).unwrap();
        let fine = Stratification::new(c.clone(), 1, &[(0, vec![Simplex::vertex(0)])]).unwrap();
        Coarsening::new(fine, Stratification::trivial(c).unwrap()).unwrap()
    }

    fn cone_line() -> Stratification {
        // the cone on S^1 times an interval, singular along the cone line
        let circle = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
        circle.join_with(&SimplicialComplex::from_facets([[10u32, 11], [11, 12]]).unwrap(), 1).unwrap()
    }

    #[test]
    fn identity_is_all_sources() {
        let c = Coarsening::identity(cone_line());
        assert!(c.classes().iter().all(|k| k.is_source()));
        assert!(c.is_simple());
        assert!(simple_chain(&c).unwrap().is_empty());
        let split = build_se(&c).unwrap();
        assert_eq!(split.se, *c.fine());
    }

    #[test]
    fn pinch_point_is_exceptional() {
        let t = pinched_torus();
        let c = Coarsening::new(t.clone(), Stratification::trivial(t.complex().clone()).unwrap()).unwrap();
        assert_eq!(c.exceptional(), [0]);
        assert!(c.one_exceptional().is_empty());
        assert!(c.is_simple());
        let split = build_se(&c).unwrap();
        assert_eq!(split.se, *c.coarse());
        assert!(split.remaining.is_identity());
    }

    #[test]
    fn one_exceptional_point() {
        let c = real_line_with_point();
        assert_eq!(c.classes()[0], StratumClass::OneExceptional);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_k_perversity(&c, &mut rng, false).is_none());
    }

    #[test]
    fn fountain_from_point_refinement() {
        let s = cone_line();
        let line = s.strata().iter().find(|st| st.dim == 1).unwrap().id;
        let v = s.complex().simplex(s.strata()[line].simplices[0]).vertices()[0];
        let refined = s.point_refinement(v).unwrap();
        let c = Coarsening::new(refined, s.clone()).unwrap();
        assert_eq!(c.fountains().len(), 1);
        assert!(c.exceptional().is_empty());
        // a regular vertex refined is exceptional instead
        let r = s.complex().simplex(s.strata().iter().find(|st| st.dim == 3).unwrap().simplices[0]).clone();
        let refined = s.point_refinement(r.vertices()[0]).unwrap();
        let c = Coarsening::new(refined, s).unwrap();
        assert_eq!(c.exceptional().len(), 1);
    }

    #[test]
    fn not_a_coarsening_is_reported() {
        let s = cone_line();
        let c = Coarsening::new(Stratification::trivial(s.complex().clone()).unwrap(), s);
        assert!(matches!(c, Err(CoarsenError::NotACoarsening { .. }) | Err(CoarsenError::FormalDimMismatch { .. })));
    }

    #[test]
    fn single_fountain_chain() {
        let s = cone_line();
        let apex_line = s.strata().iter().find(|st| st.dim == 1).unwrap().id;
        let v = s.complex().simplex(s.strata()[apex_line].simplices[0]).vertices()[0];
        let a = s.point_refinement(v).unwrap();
        let c = Coarsening::new(a, s).unwrap();
        let chain = simple_chain(&c).unwrap();
        assert_eq!(chain.len(), 1);
        assert!(chain.iter().all(Coarsening::is_simple));
    }

    /// Boundary of the 5-simplex with a flag point < edge < triangle singular.
    pub(crate) fn nested_flag() -> Coarsening {
        let c = SimplicialComplex::sphere(4, 0);
        let tri = Simplex::new([0, 1, 2]).unwrap();
        let edge = Simplex::new([0, 1]).unwrap();
        let fine = Stratification::new(c.clone(), 4, &[(0, vec![Simplex::vertex(0)]), (1, vec![edge]), (2, vec![tri])]).unwrap();
        Coarsening::new(fine, Stratification::trivial(c).unwrap()).unwrap()
    }

    #[test]
    fn depth_two_needs_two_steps() {
        let c = nested_flag();
        assert_eq!(c.exceptional().len(), 3);
        assert!(!c.is_simple());
        let chain = simple_chain(&c).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain.iter().all(Coarsening::is_simple));
        let composed = chain[0].compose(&chain[1]).unwrap();
        assert_eq!(composed.map(), c.map());
        let split = build_se(&c).unwrap();
        assert_eq!(split.se, *c.coarse());
    }

    #[test]
    fn build_se_is_idempotent() {
        let s = cone_line();
        let r = s.complex().simplex(s.strata().iter().find(|st| st.dim == 3).unwrap().simplices[0]).vertices()[0];
        let c = Coarsening::new(s.point_refinement(r).unwrap(), s).unwrap();
        let split = build_se(&c).unwrap();
        let again = build_se(&split.remaining).unwrap();
        assert_eq!(again.se, split.se);
    }

    #[test]
    fn laws_on_random_perversities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = cone_line();
        let line = s.strata().iter().find(|st| st.dim == 1).unwrap().id;
        let v = s.complex().simplex(s.strata()[line].simplices[0]).vertices()[0];
        let c = Coarsening::new(s.point_refinement(v).unwrap(), s).unwrap();
        for _ in 0..50 {
            let p = random_k_perversity(&c, &mut rng, true).unwrap();
            assert!(c.is_k_perversity(&p));
            assert!(pushforward_laws(&c, &p).is_empty());
            let q = random_perversity(c.coarse().poset(), &mut rng);
            assert!(pullback_laws(&c, &q).is_empty());
            let any = random_perversity(c.fine().poset(), &mut rng);
            assert!(pull_push_laws(&c, &any).is_empty());
        }
    }
}
