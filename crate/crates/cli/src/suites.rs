//! Verification suites run by `stratum verify <suite>`. Each suite fills a
//! [`Report`] with one verdict per check; randomized suites draw from a
//! ChaCha stream seeded by a fixed constant that is echoed in the report.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratum_core::coarsen::{
    build_se, pull_push_laws, pullback_laws, pushforward_laws, random_k_perversity, random_perversity, simple_chain,
    theorem_hypothesis_report, chain_laws, CoarsenError, Coarsening, LawViolation, LinkFact,
};
use stratum_core::extint::{ExtInt, Finite, NegInf, PosInf};
use stratum_core::ihom::{
    calibrate_cone_offset, calibrate_two_cone_offset, cone_threshold_probe, intersection_homology,
    mv_exactness_check, pi0_p, pi1_regular, two_cone_probe, Group, IhomError, Ring, TwoConeValues,
};
use stratum_core::oracle::intersection_betti_q;
use stratum_core::strat::StratError;
use stratum_core::symcalc::{from_dual, poincare_sphere, Calculator, Claim, Provenance, SidedPerversity, SymError, SymGroup, SymSpace};
use stratum_core::{Perversity, Simplex, SimplicialComplex, Stratification};

use crate::atoms::{atoms_text, calculator_from, AtomsError};
use crate::corpus::{self, corpus, entry, Metadata, MARK_P, PINCH};
use crate::format::{emit, parse_strat_file};
use crate::oracles::{check_expected, sweep};
use crate::report::Report;

/// Seed used when none is given on the command line.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Suite names in the order `all` runs them.
pub const SUITES: [&str; 14] = [
    "corpus-oracles",
    "perversity-laws",
    "one-exceptional",
    "pi0-invariance",
    "pinched-torus",
    "cone-probe",
    "coarsening-invariance",
    "exceptional-invariance",
    "double-suspension",
    "three-filtrations",
    "two-cone",
    "round-trip",
    "mv-exactness",
    "simple-chain",
];

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    Unknown(String),
    #[error("missing corpus item {0}")]
    MissingFixture(String),
    #[error(transparent)]
    Atoms(#[from] AtomsError),
    #[error(transparent)]
    Ihom(#[from] IhomError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Coarsen(#[from] CoarsenError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Space(#[from] stratum_core::symcalc::ParseSpaceError),
}

type Outcome = Result<(), SuiteError>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A corpus coarsening by `entry/name`, with the entry's metadata.
pub fn coarsening(key: &str) -> Result<(Coarsening, Metadata), SuiteError> {
    let missing = || SuiteError::MissingFixture(key.into());
    let (e, _) = key.split_once('/').ok_or_else(missing)?;
    let e = entry(e).ok_or_else(missing)?;
    let c = e.coarsenings().into_iter().find(|(n, _)| n == key).ok_or_else(missing)?.1;
    Ok((c, e.metadata))
}

fn stratification(entry_name: &str, strat: &str) -> Result<Stratification, SuiteError> {
    entry(entry_name)
        .and_then(|e| e.stratification(strat).cloned())
        .ok_or_else(|| SuiteError::MissingFixture(format!("{entry_name}/{strat}")))
}

fn all_coarsenings() -> Vec<(String, Coarsening)> {
    corpus().iter().flat_map(|e| e.coarsenings()).collect()
}

fn calculator() -> Result<Calculator, SuiteError> {
    Ok(calculator_from(&atoms_text()?)?)
}

fn fmt_values(v: &[ExtInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Draws up to `n` distinct K-perversities below the top perversity.
fn k_samples(c: &Coarsening, rng: &mut ChaCha8Rng, n: usize) -> Vec<Perversity> {
    let mut out: Vec<Perversity> = Vec::new();
    for _ in 0..4 * n {
        match random_k_perversity(c, rng, true) {
            Some(p) if !out.contains(&p) => out.push(p),
            Some(_) => {}
            None => break,
        }
        if out.len() == n {
            break;
        }
    }
    out
}

/// Runs a suite by name. Internal errors become a failing verdict.
pub fn run(name: &str, seed: u64) -> Result<Report, SuiteError> {
    let mut r = Report::new(format!("stratum verify {name} --seed {seed}"));
    if name == "all" {
        let gate = run("corpus-oracles", seed)?;
        let ok = gate.passed();
        r.absorb(gate);
        if !ok {
            r.check("gate", false, "corpus oracles failed; later suites not run");
            return Ok(r);
        }
        for s in &SUITES[1..] {
            r.line(format!("== {s}"));
            r.absorb(run(s, seed)?);
        }
        return Ok(r);
    }
    let result = match name {
        "corpus-oracles" => corpus_oracles(&mut r),
        "perversity-laws" => perversity_laws(&mut r, seed),
        "one-exceptional" => one_exceptional(&mut r, seed),
        "pi0-invariance" => pi0_invariance(&mut r, seed),
        "pinched-torus" => pinched_torus(&mut r),
        "cone-probe" => cone_probe(&mut r),
        "coarsening-invariance" => coarsening_invariance(&mut r, seed),
        "exceptional-invariance" => exceptional_invariance(&mut r, seed),
        "double-suspension" => double_suspension(&mut r),
        "three-filtrations" => three_filtrations(&mut r),
        "two-cone" => two_cone(&mut r),
        "round-trip" => round_trip(&mut r),
        "mv-exactness" => mv_exactness(&mut r),
        "simple-chain" => simple_chains(&mut r),
        _ => return Err(SuiteError::Unknown(name.into())),
    };
    if let Err(e) = result {
        r.check(format!("{name}: completed"), false, format!("internal error: {e}"));
    }
    Ok(r)
}

pub fn corpus_oracles(r: &mut Report) -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for e in corpus() {
        if let Some(f) = &e.file {
            r.input(e.name, &emit(f));
        }
        for x in &e.expected {
            let o = check_expected(&e, x);
            checked += 1;
            r.line(format!(
                "{} {}: {} expected={} main={} oracle={}",
                o.entry,
                o.source,
                o.check,
                o.expected,
                o.main,
                o.oracle.as_deref().unwrap_or("-")
            ));
            if !o.pass() {
                mismatches.push(format!("{}: {}", o.entry, o.check));
            }
        }
        for o in sweep(&e) {
            checked += 1;
            if !o.pass() {
                mismatches.push(format!("{}: {} main={} oracle={:?}", o.entry, o.check, o.main, o.oracle));
            }
        }
    }
    let cert = if mismatches.is_empty() { format!("{checked} values recomputed") } else { mismatches.join("; ") };
    r.check("expected values match their oracles", mismatches.is_empty(), cert);

    let dir = corpus::corpus_dir();
    let mut shipped = 0;
    let mut bad = Vec::new();
    for e in corpus() {
        let Some(f) = &e.file else { continue };
        let path = dir.join(format!("{}.strat", e.name));
        match std::fs::read_to_string(&path) {
            Ok(text) => match parse_strat_file(&text) {
                Ok(parsed) if &parsed == f => shipped += 1,
                Ok(_) => bad.push(format!("{} differs from the fixture", e.name)),
                Err(err) => bad.push(format!("{}: {err}", e.name)),
            },
            Err(err) => bad.push(format!("{}: {err}", path.display())),
        }
    }
    let cert = if bad.is_empty() { format!("{shipped} files in {}", dir.display()) } else { bad.join("; ") };
    r.check("shipped .strat files match the fixtures", bad.is_empty(), cert);
    Ok(())
}

pub fn perversity_laws(r: &mut Report, seed: u64) -> Outcome {
    const PER_COARSENING: usize = 12;
    r.seed("perversity-laws", seed);
    let mut rng = rng(seed);
    let laws = [
        "double dual",
        "p <= t iff Dp >= 0",
        "K-condition is self-dual",
        "pull after push",
        "push after pull",
        "pullback is a K-perversity",
        "pullback below top",
        "source rule",
        "pulled-back dual bound",
        "dual commutes with pushforward",
        "pushforward below top",
        "exceptional positivity",
        "restriction to first step",
        "pushforward to second step",
    ];
    let mut found: BTreeMap<&str, Vec<String>> = laws.iter().map(|l| (*l, Vec::new())).collect();
    let mut record = |vs: Vec<LawViolation>, on: &str| {
        for v in vs {
            found.entry(v.law).or_default().push(format!("{on}: {v}"));
        }
    };
    let coarsenings = all_coarsenings();
    let (mut total, mut k_total) = (0usize, 0usize);
    for (name, c) in &coarsenings {
        let (fp, cp) = (c.fine().poset(), c.coarse().poset());
        let top = Perversity::top(fp);
        for _ in 0..PER_COARSENING {
            let p = random_perversity(fp, &mut rng);
            total += 1;
            let dp = p.dual(fp);
            let mut own = Vec::new();
            if dp.dual(fp) != p {
                own.push(LawViolation { law: "double dual", stratum: 0, detail: format!("{p}") });
            }
            let below = p.first_excess(&top).is_none();
            let nonneg = fp.singular().all(|s| dp.value(s) >= ExtInt::ZERO);
            if below != nonneg {
                own.push(LawViolation { law: "p <= t iff Dp >= 0", stratum: 0, detail: format!("{p}") });
            }
            if c.is_k_perversity(&p) != c.is_k_perversity(&dp) {
                own.push(LawViolation { law: "K-condition is self-dual", stratum: 0, detail: format!("{p}") });
            }
            record(own, name);
            record(pull_push_laws(c, &p), name);
            let q = random_perversity(cp, &mut rng);
            total += 1;
            record(pullback_laws(c, &q), name);
            if let Some(k) = random_k_perversity(c, &mut rng, true) {
                total += 1;
                k_total += 1;
                record(pushforward_laws(c, &k), name);
            }
        }
    }
    let mut pairs: Vec<(String, Coarsening, Coarsening)> = Vec::new();
    for (a, b) in [("three_filtrations/s_to_r", "three_filtrations/r_to_t"), ("circle_in_sphere/refine", "circle_in_sphere/forget")] {
        let (first, _) = coarsening(a)?;
        let (second, _) = coarsening(b)?;
        pairs.push((format!("{a} then {b}"), first, second));
    }
    let (nested, _) = coarsening("nested_flag/forget")?;
    let steps = simple_chain(&nested)?;
    for (i, w) in steps.windows(2).enumerate() {
        pairs.push((format!("nested_flag simple steps {i}, {}", i + 1), w[0].clone(), w[1].clone()));
    }
    let mut chain_samples = 0;
    for (name, first, second) in &pairs {
        let composite = first.compose(second)?;
        for _ in 0..PER_COARSENING {
            if let Some(p) = random_k_perversity(&composite, &mut rng, true) {
                total += 1;
                chain_samples += 1;
                record(chain_laws(first, second, &p), name);
            }
        }
    }
    r.line(format!(
        "{total} perversities over {} coarsenings and {} composable pairs; {k_total} K-perversities; {chain_samples} chain samples",
        coarsenings.len(),
        pairs.len()
    ));
    r.check("at least 200 perversities", total >= 200, format!("{total}"));
    r.check("at least 6 coarsenings", coarsenings.len() >= 6, format!("{}", coarsenings.len()));
    for (law, vs) in &found {
        let cert = match vs.first() {
            None => "0 violations".to_string(),
            Some(first) => format!("{} violations, first: {first}", vs.len()),
        };
        r.check(format!("law: {law}"), vs.is_empty(), cert);
    }
    Ok(())
}

pub fn one_exceptional(r: &mut Report, seed: u64) -> Outcome {
    r.seed("one-exceptional", seed);
    let (c, _) = coarsening("real_line_point/forget")?;
    r.check("fixture has a 1-exceptional stratum", !c.one_exceptional().is_empty(), format!("{:?}", c.one_exceptional()));
    let poset = c.fine().poset();
    let singular: Vec<usize> = poset.singular().collect();
    let mut values = vec![NegInf];
    values.extend((-3..=3).map(Finite));
    values.push(PosInf);
    let mut swept = 0usize;
    let mut accepted = Vec::new();
    let mut index = vec![0usize; singular.len()];
    loop {
        let mut v = vec![ExtInt::ZERO; poset.len()];
        for (i, &s) in singular.iter().enumerate() {
            v[s] = values[index[i]];
        }
        let p = Perversity::new(poset, v).expect("zero on regular strata");
        swept += 1;
        if c.is_k_perversity(&p) {
            accepted.push(p.to_string());
        }
        let Some(i) = (0..index.len()).find(|&i| index[i] + 1 < values.len()) else { break };
        index[i] += 1;
        index[..i].iter_mut().for_each(|x| *x = 0);
    }
    let cert = if accepted.is_empty() { format!("{swept} perversities rejected") } else { accepted.join(" ") };
    r.check("no K-perversity in the exhaustive sweep", accepted.is_empty(), cert);
    let mut rng = rng(seed);
    let drawn = (0..50).filter(|_| random_k_perversity(&c, &mut rng, false).is_some()).count();
    r.check("random K-perversity search finds none", drawn == 0, format!("{drawn} of 50 draws succeeded"));
    Ok(())
}

pub fn pi0_invariance(r: &mut Report, seed: u64) -> Outcome {
    r.seed("pi0-invariance", seed);
    let mut rng = rng(seed);
    for (name, c) in all_coarsenings() {
        let ps = k_samples(&c, &mut rng, 12);
        if ps.is_empty() {
            let excused = !c.one_exceptional().is_empty();
            r.check(format!("{name}: pi0"), excused, "no K-perversity exists (1-exceptional stratum)");
            continue;
        }
        let mut bad = Vec::new();
        for p in &ps {
            let q = c.pushforward(p).perversity;
            let fine = pi0_p(c.fine(), p)?;
            let coarse = pi0_p(c.coarse(), &q)?;
            let mut forward: BTreeMap<usize, usize> = BTreeMap::new();
            let mut ok = fine.count == coarse.count;
            for (g, label) in fine.labels.iter().enumerate() {
                let Some(a) = label else { continue };
                let Some(b) = coarse.labels[g] else {
                    ok = false;
                    continue;
                };
                ok &= *forward.entry(*a).or_insert(b) == b;
            }
            let mut images: Vec<usize> = forward.values().copied().collect();
            images.sort_unstable();
            images.dedup();
            ok &= images.len() == fine.count && forward.len() == fine.count;
            if !ok {
                bad.push(format!("p = {p}: {} vs {}", fine.count, coarse.count));
            }
        }
        let cert = if bad.is_empty() { format!("{} K-perversities, bijection on components", ps.len()) } else { bad.join("; ") };
        r.check(format!("{name}: pi0"), bad.is_empty(), cert);
    }
    Ok(())
}

pub fn pinched_torus(r: &mut Report) -> Outcome {
    let fine = stratification("pinched_torus", "fine")?;
    let pi1 = pi1_regular(&fine, None)?.abelianization();
    r.check("abelianized pi1 of the regular part is Z", pi1 == Group::free(1), format!("{pi1:?}"));
    let zero = Perversity::zero(fine.poset());
    let ih = intersection_homology(&fine, &zero, Ring::Z)?;
    r.text(&ih.lines("IH"));
    let free = ih.degrees.iter().all(|g| g.torsion.is_empty());
    r.check("IH over Z at the zero perversity is (Z, 0, Z)", ih.betti() == [1, 0, 1] && free, format!("{:?}", ih.betti()));
    let q = intersection_betti_q(&fine, &zero);
    r.check("dense elimination over Q agrees", q == ih.betti(), format!("{q:?}"));
    let link = fine.link(&Simplex::vertex(PINCH))?;
    r.check("link of the pinch point is two circles", link.complex().components().len() == 2, format!("{:?}", link.complex().f_vector()));

    let mut calc = calculator()?;
    let t = SymSpace::atom("T");
    let cone = t.clone().cone();
    calc.record_paper(t, vec![Finite(0); 2], 1, Claim::Is(SymGroup::Trivial), "the regular generator dies at the zero perversity")?;
    calc.record_paper(cone.clone(), vec![Finite(0); 3], 1, Claim::Is(SymGroup::Trivial), "pi1 of the open cone at the zero perversity")?;
    let derived = calc.derive(&cone, &[Finite(0); 3], 1)?;
    r.line(derived.to_string());
    let via_paper = derived.chain.iter().any(|s| s.rule == "paper");
    r.check(
        "pi1 of the cone at the zero perversity is trivial with a paper chain",
        derived.claim == Claim::Is(SymGroup::Trivial) && via_paper,
        derived.to_string(),
    );
    let recorded = calc.facts().iter().any(|f| f.space == cone && f.provenance == Provenance::Paper && f.claim == Claim::Is(SymGroup::Trivial));
    r.check("paper fact recorded", recorded, "pi[1]^{0,0,0}(c(T)) = trivial");
    let mut bad = Vec::new();
    for l in 1..=4 {
        let f = calc.rule_cone(&cone, &[Finite(1), Finite(0), Finite(0)], l)?;
        if f.claim != Claim::Is(SymGroup::Trivial) {
            bad.push(f.to_string());
        }
    }
    r.check("cone rule gives trivial for l = 1..4 with Dp(v) = 0", bad.is_empty(), bad.join("; "));
    let consistency = calc.consistency_check();
    r.check("fact base consistent", consistency.consistent(), format!("{} requests compared", consistency.requests_checked));
    Ok(())
}

/// Further links for the cone probe, beyond the calibration set.
pub fn probe_links() -> Result<Vec<(&'static str, Stratification)>, SuiteError> {
    Ok(vec![
        ("T2", Stratification::trivial(corpus::torus())?),
        ("S2", Stratification::trivial(SimplicialComplex::sphere(2, 0))?),
        ("RP2", Stratification::trivial(corpus::projective_plane())?),
        ("S3", Stratification::trivial(SimplicialComplex::sphere(3, 0))?),
        ("pinched torus", stratification("pinched_torus", "fine")?),
        ("S2 with a marked point", stratification("sphere2_point", "fine")?),
        ("suspended torus", stratification("suspension_torus", "main")?),
    ])
}

pub fn cone_probe(r: &mut Report) -> Outcome {
    let offset = calibrate_cone_offset(Ring::Z)?;
    r.line(format!("calibrated cone offset: {offset} (isomorphism through Dp(v) + {offset})"));
    for (name, link) in probe_links()? {
        let p = Perversity::zero(link.poset());
        let t = link.formal_dim() as i64 - 1;
        let mut apex = vec![NegInf];
        apex.extend((-1..=t + 1).map(Finite));
        apex.push(PosInf);
        let mut bad = Vec::new();
        let mut ranges = Vec::new();
        for &a in &apex {
            let probe = cone_threshold_probe(&link, &p, a, Ring::Z, offset)?;
            ranges.push(format!("p(v)={a}:{}", probe.iso_through));
            if !probe.consistent {
                bad.push(format!("p(v) = {a}: predicted {}, agree through {}", probe.predicted, probe.iso_through));
            }
        }
        let cert = if bad.is_empty() { ranges.join(" ") } else { bad.join("; ") };
        r.check(format!("cone on {name}: {} apex values", apex.len()), bad.is_empty() && apex.len() >= 2, cert);
    }
    Ok(())
}

/// Coarsenings without exceptional strata used for IH invariance.
pub const INVARIANCE_FIXTURES: [&str; 5] = [
    "suspension_torus/identity",
    "double_suspension_torus/poles",
    "circle_in_sphere/refine",
    "two_cone/center",
    "marked_arc_star/s_to_r",
];

fn ih_agreement(c: &Coarsening, ps: &[Perversity]) -> Result<Vec<String>, SuiteError> {
    let mut bad = Vec::new();
    for p in ps {
        let q = c.pushforward(p).perversity;
        let a = intersection_homology(c.fine(), p, Ring::Z)?;
        let b = intersection_homology(c.coarse(), &q, Ring::Z)?;
        if !a.same_groups(&b) {
            bad.push(format!("p = {p}: {:?} vs {:?}", a.betti(), b.betti()));
        }
    }
    Ok(bad)
}

pub fn coarsening_invariance(r: &mut Report, seed: u64) -> Outcome {
    r.seed("coarsening-invariance", seed);
    let mut rng = rng(seed);
    let mut usable = 0;
    for key in INVARIANCE_FIXTURES {
        let (c, _) = coarsening(key)?;
        let ps = k_samples(&c, &mut rng, 8);
        let no_exceptional = c.exceptional().is_empty();
        let bad = ih_agreement(&c, &ps)?;
        let kind = if !c.fountains().is_empty() { "fountain" } else if c.is_identity() { "identity" } else { "source" };
        let cert = if bad.is_empty() { format!("{kind}; {} K-perversities, groups equal over Z", ps.len()) } else { bad.join("; ") };
        let ok = no_exceptional && !ps.is_empty() && bad.is_empty();
        usable += usize::from(ok);
        r.check(format!("{key}: IH invariance"), ok, cert);
    }
    r.check("at least 4 coarsenings", usable >= 4, format!("{usable}"));
    let (full, _) = coarsening("three_filtrations/s_to_r")?;
    let zero = Perversity::zero(full.fine().poset());
    let a = intersection_homology(full.fine(), &zero, Ring::Z)?;
    let b = intersection_homology(full.coarse(), &full.pushforward(&zero).perversity, Ring::Z)?;
    r.line(format!(
        "observation: unrestricted three_filtrations/s_to_r at the zero perversity gives {:?} vs {:?}; the middle filtration is not locally conical",
        a.betti(),
        b.betti()
    ));
    Ok(())
}

/// Coarsenings whose exceptional links are boundaries of simplices.
pub const EXCEPTIONAL_FIXTURES: [&str; 3] = ["sphere2_point/forget", "sphere3_point/forget", "circle_in_sphere/forget"];

/// `b` when the normal link of stratum `s`, the link of one of its
/// top-dimensional simplices, is the boundary of a `b`-simplex with `b >= 2`.
fn simplex_boundary_sphere(strat: &Stratification, s: usize) -> Option<usize> {
    let st = &strat.strata()[s];
    let top = st.simplices.iter().map(|&g| strat.complex().simplex(g)).find(|x| x.dim() == st.dim)?;
    let link = strat.complex().link(top).ok()?;
    let d = usize::try_from(link.dim()).ok()?;
    let is_boundary = link.vertices().len() == d + 2
        && link.facets().len() == d + 2
        && link.facets().iter().all(|f| f.dim() == d);
    (is_boundary && d >= 1).then_some(d + 1)
}

pub fn exceptional_invariance(r: &mut Report, seed: u64) -> Outcome {
    r.seed("exceptional-invariance", seed);
    let mut rng = rng(seed);
    let mut calc = calculator()?;
    let mut usable = 0;
    for key in EXCEPTIONAL_FIXTURES {
        let (c, meta) = coarsening(key)?;
        let fine = c.fine();
        let mut spheres = Vec::new();
        for s in c.exceptional() {
            match simplex_boundary_sphere(fine, s) {
                Some(b) if b == fine.poset().codim(s) => spheres.push((s, b)),
                _ => {}
            }
        }
        let all_spheres = !c.exceptional().is_empty() && spheres.len() == c.exceptional().len();
        r.check(
            format!("{key}: exceptional links are simplex boundaries"),
            all_spheres,
            format!("(stratum, b) = {spheres:?}"),
        );
        let ps = k_samples(&c, &mut rng, 8);
        let mut not_applicable = Vec::new();
        for p in &ps {
            let mut facts = BTreeMap::new();
            for &(s, b) in &spheres {
                let link_cone = SymSpace::atom(&format!("S{}", b - 1)).cone();
                let f = calc.rule_cone(&link_cone, &[p.value(s), ExtInt::ZERO], 1)?;
                facts.insert(s, f.claim.link_fact());
            }
            let report = theorem_hypothesis_report(&c, p, meta.pre_thom_mather, &|s| *facts.get(&s).unwrap_or(&LinkFact::Unknown));
            if !report.exceptional_invariance.applies {
                not_applicable.push(format!("p = {p}: {}", report.exceptional_invariance.failed.join(", ")));
            }
        }
        let applies = !ps.is_empty() && not_applicable.is_empty();
        let cert = if not_applicable.is_empty() { format!("{} K-perversities", ps.len()) } else { not_applicable.join("; ") };
        r.check(format!("{key}: invariance with exceptional strata applies"), applies, cert);
        let bad = ih_agreement(&c, &ps)?;
        let cert = if bad.is_empty() { format!("{} K-perversities, groups equal over Z", ps.len()) } else { bad.join("; ") };
        r.check(format!("{key}: IH invariance"), bad.is_empty() && !ps.is_empty(), cert);
        usable += usize::from(all_spheres && applies && bad.is_empty());
    }
    r.check("at least 2 fixtures", usable >= 2, format!("{usable}"));
    Ok(())
}

pub fn double_suspension(r: &mut Report) -> Outcome {
    let e = entry("double_suspension_poincare").ok_or_else(|| SuiteError::MissingFixture("double_suspension_poincare".into()))?;
    let space: SymSpace = e.symbolic.unwrap_or_default().parse()?;
    let SymSpace::Coarsen(fine_space, _) = &space else { return Err(SuiteError::MissingFixture("coarsened space".into())) };
    let mut calc = calculator()?;
    let meta = calc.meta(fine_space)?;
    let (classes, _) = calc.classify(&space)?;
    let exceptional: Vec<usize> = (0..classes.len()).filter(|&s| classes[s].is_exceptional()).collect();
    let dims: Vec<usize> = exceptional.iter().map(|&s| meta.strata[s].dim).collect();
    r.line(format!("space: {space}"));
    r.check("four exceptional strata of dimensions 0,0,1,1", dims == [0, 0, 1, 1], format!("{dims:?}"));
    let p = from_dual(&meta, &vec![Finite(1); meta.len()]);
    let h = calc.hypotheses(&space, &SidedPerversity::Fine(p.clone()))?;
    r.check("Dp = 1 gives a K-perversity", h.k_perversity, fmt_values(&p));
    r.check("p <= t", h.below_top, fmt_values(&p));
    r.check("pushforward is zero", h.coarse.iter().all(|v| *v == ExtInt::ZERO), fmt_values(&h.coarse));
    let fact = calc.rule_coarsen(&space, SidedPerversity::Fine(p.clone()), 1)?;
    r.line(fact.to_string());
    let names_link = fact.chain.first().is_some_and(|s| s.certificate.contains("exceptional links have simply connected cones"));
    r.check("coarsening rule returns unknown naming the link hypothesis", !fact.claim.is_known() && names_link, fact.to_string());
    calc.record_paper((**fine_space).clone(), p, 1, Claim::IsNot(SymGroup::Trivial), "pi1 on the fine side is nontrivial")?;
    calc.record_paper(space.clone(), h.coarse.clone(), 1, Claim::Is(SymGroup::Trivial), "pi1 of the sphere at the zero perversity")?;
    let report = calc.consistency_check();
    let kept = calc.facts().iter().any(|f| f.provenance == Provenance::Paper && f.claim == Claim::IsNot(SymGroup::Trivial));
    r.check("consistent with the nontrivial fine-side fact retained", report.consistent() && kept, format!("{} requests compared", report.requests_checked));

    let mut corrupted = Calculator::new();
    stratum_core::symcalc::with_spheres(&mut corrupted, 3)?;
    corrupted.declare_atom(poincare_sphere(SymGroup::Trivial))?;
    corrupted.record_paper(SymSpace::atom("P"), vec![ExtInt::ZERO], 1, Claim::IsNot(SymGroup::Trivial), "pi1 of P is nontrivial")?;
    let caught = !corrupted.consistency_check().consistent();
    r.check("corrupted Poincare sphere is caught", caught, "declared trivial pi1 against the recorded fact");
    Ok(())
}

pub fn three_filtrations(r: &mut Report) -> Outcome {
    let s = stratification("three_filtrations", "S")?;
    let rr = stratification("three_filtrations", "R")?;
    let t = stratification("three_filtrations", "T")?;
    let report = rr.cs_diagnostics();
    let full = |p: &stratum_core::strat::LinkProfile| p.skeleta.last().map(|h| h.ranks.clone()).unwrap_or_default();
    let torus_vs_sphere = report.link_inconsistencies.iter().find(|i| {
        let dim = rr.strata()[i.stratum].dim;
        let pair = [full(&i.first_profile), full(&i.second_profile)];
        dim == 1 && pair.contains(&vec![0, 2, 1]) && pair.contains(&vec![0, 0, 1])
    });
    let cert = match torus_vs_sphere {
        Some(i) => format!(
            "stratum {} (dim 1): link of {:?} has reduced betti {:?}, link of {:?} has {:?}",
            i.stratum,
            i.first.vertices(),
            full(&i.first_profile),
            i.second.vertices(),
            full(&i.second_profile)
        ),
        None => format!("{} inconsistencies, none torus against sphere", report.link_inconsistencies.len()),
    };
    r.check("R: link inconsistency along the one-dimensional stratum", torus_vs_sphere.is_some(), cert);
    let marked = rr.link_profile(&Simplex::vertex(MARK_P))?;
    r.line(format!("R: link of the marked point has reduced betti {:?}", full(&marked)));
    for (name, x) in [("S", &s), ("T", &t)] {
        let d = x.cs_diagnostics();
        r.check(format!("{name}: link diagnostics pass"), d.passes(), format!("{} inconsistencies", d.link_inconsistencies.len()));
    }
    Ok(())
}

pub fn two_cone(r: &mut Report) -> Outcome {
    let offset = calibrate_two_cone_offset(Ring::Z)?;
    r.line(format!("calibrated two-cone offset: {offset} (agreement through Dp(u,v) + {offset})"));
    let (fixture, _) = coarsening("two_cone/center")?;
    let link = Stratification::trivial(SimplicialComplex::sphere(1, 0))?;
    let poset = fixture.fine().poset();
    let apex_id = fixture.fine().stratum_of_simplex(&Simplex::vertex(6))?;
    let disk_id = (0..poset.len()).find(|&s| !poset.is_regular(s) && s != apex_id).expect("disk stratum");
    let mut generated = 0;
    let mut problems = Vec::new();
    let mut same_spaces = true;
    let mut ranges = Vec::new();
    for d in -3..=3i64 {
        for a in -3..=5i64 {
            let mut v = vec![ExtInt::ZERO; poset.len()];
            v[disk_id] = Finite(d);
            v[apex_id] = Finite(a);
            let p = Perversity::new(poset, v).expect("zero on regular strata");
            if !fixture.is_k_perversity(&p) {
                continue;
            }
            generated += 1;
            let values = TwoConeValues { link: Perversity::zero(link.poset()), disk: Finite(d), apex: Finite(a) };
            match two_cone_probe(2, &link, &values, Ring::Z, offset) {
                Ok(probe) => {
                    same_spaces &= probe.refined == *fixture.fine() && probe.coarse == *fixture.coarse();
                    ranges.push(format!("({d},{a}):{}", probe.agree_through));
                    if !probe.consistent {
                        problems.push(format!("disk {d}, apex {a}: predicted {}, agree through {}", probe.predicted, probe.agree_through));
                    }
                }
                Err(IhomError::TwoConeBounds(m)) => problems.push(format!("disk {d}, apex {a}: bounds fail: {m}")),
                Err(e) => return Err(e.into()),
            }
        }
    }
    r.check("probe spaces equal the corpus fixture", same_spaces, "refined and coarse stratifications");
    r.check("bounds Dq(v) <= Dp(u,v) <= Dq(v) + b on every K-perversity", problems.iter().all(|p| !p.contains("bounds")), format!("{generated} perversities"));
    let cert = if problems.is_empty() { ranges.join(" ") } else { problems.join("; ") };
    r.check("agreement range matches the calibrated threshold", problems.is_empty() && generated > 0, cert);
    let bad = TwoConeValues { link: Perversity::zero(link.poset()), disk: Finite(0), apex: Finite(3) };
    let rejected = matches!(two_cone_probe(2, &link, &bad, Ring::Z, offset), Err(IhomError::TwoConeBounds(_)));
    r.check("data outside the bounds is rejected", rejected, "disk 0, apex 3");
    Ok(())
}

pub fn round_trip(r: &mut Report) -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for e in corpus() {
        let Some(f) = &e.file else { continue };
        n += 1;
        let text = emit(f);
        match parse_strat_file(&text) {
            Ok(back) if &back == f && emit(&back) == text => {}
            Ok(_) => bad.push(e.name.to_string()),
            Err(err) => bad.push(format!("{}: {err}", e.name)),
        }
    }
    r.check("emit then parse is the identity", bad.is_empty(), if bad.is_empty() { format!("{n} entries") } else { bad.join("; ") });
    Ok(())
}

pub fn mv_exactness(r: &mut Report) -> Outcome {
    let cases = [
        ("pinched_torus", "fine", PINCH),
        ("suspension_torus", "main", corpus::APEX),
        ("cone_torus", "main", corpus::APEX),
        ("sphere2_point", "fine", 0),
        ("circle_in_sphere", "refined", 10),
    ];
    for (e, s, v) in cases {
        let strat = stratification(e, s)?;
        let x = strat.complex();
        let u = x.closed_star(&Simplex::vertex(v)).map_err(StratError::from)?;
        let w = x.full_subcomplex(|w| w != v);
        let mut bad = Vec::new();
        for p in [Perversity::zero(strat.poset()), Perversity::top(strat.poset())] {
            let m = mv_exactness_check(&strat, &p, &u, &w)?;
            if !m.exact() {
                bad.push(format!("p = {p}: euler defect {}", m.euler_defect));
            }
        }
        let cert = if bad.is_empty() { format!("star of {v} and its complement, zero and top") } else { bad.join("; ") };
        r.check(format!("{e}/{s}: Mayer-Vietoris exact"), bad.is_empty(), cert);
    }
    Ok(())
}

pub fn simple_chains(r: &mut Report) -> Outcome {
    for (name, c) in all_coarsenings() {
        let steps = simple_chain(&c)?;
        let mut composite = Coarsening::identity(c.fine().clone());
        for s in &steps {
            composite = composite.compose(s)?;
        }
        let ok = steps.iter().all(Coarsening::is_simple) && composite.map() == c.map();
        r.check(format!("{name}: simple chain"), ok, format!("{} steps", steps.len()));
        if c.exceptional().is_empty() {
            continue;
        }
        match build_se(&c) {
            Ok(split) => {
                let back = split.absorb.compose(&split.remaining)?;
                let ok = split.remaining.exceptional().is_empty() && back.map() == c.map();
                r.check(format!("{name}: exceptional split"), ok, format!("{} strata in the middle", split.se.strata().len()));
            }
            Err(e) => r.line(format!("{name}: no exceptional split ({e})")),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run("nope", 1), Err(SuiteError::Unknown(_))));
    }

    #[test]
    fn fixtures_exist() {
        for key in INVARIANCE_FIXTURES.iter().chain(&EXCEPTIONAL_FIXTURES) {
            coarsening(key).unwrap();
        }
    }

    #[test]
    fn simplex_boundaries_are_recognized() {
        let s = Stratification::trivial(SimplicialComplex::sphere(2, 0).cone(9).unwrap()).unwrap();
        let apex = s.stratum_of_simplex(&Simplex::vertex(9)).unwrap();
        assert_eq!(simplex_boundary_sphere(&s, apex), None);
        let s = Stratification::new(s.complex().clone(), 3, &[(0, vec![Simplex::vertex(9)])]).unwrap();
        let apex = s.stratum_of_simplex(&Simplex::vertex(9)).unwrap();
        assert_eq!(simplex_boundary_sphere(&s, apex), Some(3));
    }
}
