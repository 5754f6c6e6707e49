//! Recomputation of corpus expected values. Each check is evaluated twice,
//! once by the main algorithm and once by an independent oracle, and both
//! are compared with the recorded value.

use std::collections::BTreeMap;

use stratum_core::coarsen::Coarsening;
use stratum_core::ihom::{intersection_homology, simplicial_homology, Ring};
use stratum_core::oracle::{betti_q, intersection_betti_q, link_by_cofaces, link_mismatches, regular_components_brute};
use stratum_core::{Simplex, SimplicialComplex, Stratification};

use crate::corpus::{Check, CorpusEntry, Expected, Source};

/// Main and oracle values of one expected result, rendered as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub entry: String,
    pub check: String,
    pub source: String,
    pub expected: String,
    pub main: String,
    pub oracle: Option<String>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.main == self.expected && self.oracle.as_ref().is_none_or(|o| *o == self.expected)
    }
}

fn show<T: std::fmt::Debug>(v: T) -> String {
    format!("{v:?}")
}

/// Number of strata as components of each `X_i ∖ X_{i-1}`, merging open
/// simplices of equal level when one is a face of the other.
pub fn strata_count_brute(strat: &Stratification) -> usize {
    let complex = strat.complex();
    let all: Vec<&Simplex> = complex.iter().collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if strat.level(i) == strat.level(j) && (all[i].is_face_of(all[j]) || all[j].is_face_of(all[i])) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..all.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Link profile from cofaces: rational Betti numbers of each level
/// sublevel set of the link. `None` for an empty link.
fn brute_profile(strat: &Stratification, s: &Simplex) -> Option<Vec<Vec<usize>>> {
    let complex = strat.complex();
    let link = link_by_cofaces(complex, s);
    if link.is_empty() {
        return None;
    }
    let shift = s.dim() + 1;
    let level = |t: &Simplex| strat.level(complex.index_of(&t.union(s)).unwrap()) - shift;
    let top = strat.formal_dim() - shift;
    Some(
        (0..=top)
            .map(|j| {
                let sub = SimplicialComplex::from_simplices(link.iter().filter(|t| level(t) <= j).cloned().collect());
                let mut b = betti_q(&sub);
                if let Some(b0) = b.first_mut() {
                    *b0 -= 1;
                }
                while b.len() > 1 && b.last() == Some(&0) {
                    b.pop();
                }
                b
            })
            .collect(),
    )
}

/// Links along each singular stratum agree within each simplex dimension,
/// with links rebuilt from cofaces.
pub fn links_consistent_brute(strat: &Stratification) -> bool {
    let complex = strat.complex();
    let mut groups: BTreeMap<(usize, usize), Vec<Option<Vec<Vec<usize>>>>> = BTreeMap::new();
    for (g, s) in complex.iter().enumerate() {
        if strat.is_regular_simplex(g) {
            continue;
        }
        groups.entry((strat.stratum_of(g), s.dim())).or_default().push(brute_profile(strat, s));
    }
    groups.values().all(|ps| ps.iter().all(|p| p.is_some() && *p == ps[0]))
}

/// Fine singular strata whose representative lies in a regular coarse stratum.
pub fn exceptional_count_brute(c: &Coarsening) -> usize {
    let (fine, coarse) = (c.fine(), c.coarse());
    fine.poset()
        .singular()
        .filter(|&s| {
            let t = coarse.stratum_of_simplex(fine.representative(s)).unwrap();
            coarse.poset().is_regular(t)
        })
        .count()
}

fn strat<'a>(entry: &'a CorpusEntry, name: &str) -> &'a Stratification {
    entry.stratification(name).unwrap_or_else(|| panic!("{}: no stratification {name}", entry.name))
}

fn evaluate(entry: &CorpusEntry, check: &Check) -> (String, String, Option<String>) {
    match check {
        Check::Homology { betti } => {
            let c = entry.file.as_ref().map(|f| &f.complex).expect("homology needs a complex");
            (show(betti), show(simplicial_homology(c, Ring::Z).betti()), Some(show(betti_q(c))))
        }
        Check::StrataCount { strat: n, count } => {
            let s = strat(entry, n);
            (show(count), show(s.strata().len()), Some(show(strata_count_brute(s))))
        }
        Check::RegularComponents { strat: n, count } => {
            let s = strat(entry, n);
            (show(count), show(s.regular_components().1), Some(show(regular_components_brute(s))))
        }
        Check::LinkBetti { strat: n, vertex, betti } => {
            let c = strat(entry, n).complex();
            let v = Simplex::vertex(*vertex);
            let main = c.link(&v).map(|l| simplicial_homology(&l, Ring::Z).betti());
            (show(betti), show(main.unwrap_or_default()), Some(show(betti_q(&link_by_cofaces(c, &v)))))
        }
        Check::IntersectionBetti { strat: n, perversity, betti } => {
            let named = entry.file.as_ref().and_then(|f| f.stratification(n)).unwrap();
            let p = named.perversity(perversity).expect("named perversity");
            let main = intersection_homology(&named.strat, p, Ring::Z).map(|h| h.betti());
            (show(betti), show(main.unwrap_or_default()), Some(show(intersection_betti_q(&named.strat, p))))
        }
        Check::LinksConsistent { strat: n, consistent } => {
            let s = strat(entry, n);
            (show(consistent), show(s.cs_diagnostics().links_consistent()), Some(show(links_consistent_brute(s))))
        }
        Check::ExceptionalCount { coarsening, count } => {
            let key = format!("{}/{coarsening}", entry.name);
            let c = entry.coarsenings().into_iter().find(|(n, _)| *n == key).map(|x| x.1).expect("named coarsening");
            (show(count), show(c.exceptional().len()), Some(show(exceptional_count_brute(&c))))
        }
    }
}

/// Evaluates one expected value. Paper and trivial values are also checked
/// against the oracle, which costs nothing extra.
pub fn check_expected(entry: &CorpusEntry, e: &Expected) -> Outcome {
    let (expected, main, oracle) = evaluate(entry, &e.check);
    Outcome {
        entry: entry.name.to_string(),
        check: e.check.to_string(),
        source: e.source.to_string(),
        expected,
        main,
        oracle,
    }
}

/// Whole-entry sweeps that do not depend on recorded values: homology by
/// both methods, component counts, links and link consistency.
pub fn sweep(entry: &CorpusEntry) -> Vec<Outcome> {
    let Some(file) = &entry.file else { return Vec::new() };
    let mut out = Vec::new();
    let mk = |check: String, main: String, oracle: String| Outcome {
        entry: entry.name.to_string(),
        check,
        source: Source::Trivial.to_string(),
        expected: oracle.clone(),
        main,
        oracle: Some(oracle),
    };
    if file.complex.num_simplices() <= 200 {
        out.push(mk(
            "homology over Z vs dense elimination".into(),
            show(simplicial_homology(&file.complex, Ring::Z).betti()),
            show(betti_q(&file.complex)),
        ));
    }
    out.push(mk("links from cofaces".into(), show(link_mismatches(&file.complex)), show(Vec::<Simplex>::new())));
    for n in &file.stratifications {
        let s = &n.strat;
        out.push(mk(format!("{}: strata count", n.name), show(s.strata().len()), show(strata_count_brute(s))));
        out.push(mk(format!("{}: regular components", n.name), show(s.regular_components().1), show(regular_components_brute(s))));
        out.push(mk(
            format!("{}: links consistent", n.name),
            show(s.cs_diagnostics().links_consistent()),
            show(links_consistent_brute(s)),
        ));
    }
    for (name, c) in entry.coarsenings() {
        out.push(mk(format!("{name}: exceptional strata"), show(c.exceptional().len()), show(exceptional_count_brute(&c))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{corpus, entry};

    #[test]
    fn brute_strata_count_matches() {
        let e = entry("double_suspension_torus").unwrap();
        for n in ["iterated", "join"] {
            let s = e.stratification(n).unwrap();
            assert_eq!(strata_count_brute(s), s.strata().len());
        }
    }

    #[test]
    fn inconsistent_links_are_seen_by_both() {
        let e = entry("three_filtrations").unwrap();
        let r = e.stratification("R").unwrap();
        assert!(!links_consistent_brute(r));
        assert!(!r.cs_diagnostics().links_consistent());
    }

    #[test]
    fn every_expected_value_checks_out() {
        for e in corpus() {
            for x in &e.expected {
                let o = check_expected(&e, x);
                assert!(o.pass(), "{o:?}");
            }
        }
    }
}
