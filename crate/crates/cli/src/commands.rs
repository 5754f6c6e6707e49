//! Command-line surface of the `stratum` binary.
//!
//! Every command produces a [`Report`]. Exit codes: `0` when all verdicts
//! pass, `1` when a check fails, `2` for usage, input or precondition errors.

use clap::{Parser, Subcommand, ValueEnum};
use stratum_core::coarsen::{CoarsenError, Coarsening};
use stratum_core::extint::{ExtInt, ParseExtIntError};
use stratum_core::ihom::{
    calibrate_cone_offset, calibrate_two_cone_offset, cone_threshold_probe, intersection_homology, mv_exactness_check,
    pi0_p, pi1_regular, two_cone_probe, Group, IhomError, Ring, TwoConeValues, Word,
};
use stratum_core::perv::{CodimFn, PervError};
use stratum_core::strat::StratError;
use stratum_core::symcalc::{from_dual, Calculator, ParseSpaceError, SidedPerversity, StrataMeta, SymError, SymSpace};
use stratum_core::{Perversity, Simplex, SimplicialComplex, Stratification, Vertex};

use crate::atoms::{atoms_text, calculator_from, AtomsError};
use crate::corpus::{corpus, entry, load, LoadError};
use crate::format::{emit, NamedStrat, StratFile};
use crate::report::Report;
use crate::suites::{self, SuiteError, DEFAULT_SEED};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Atoms(#[from] AtomsError),
    #[error(transparent)]
    Ihom(#[from] IhomError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Perv(#[from] PervError),
    #[error(transparent)]
    Coarsen(#[from] CoarsenError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Space(#[from] ParseSpaceError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "stratum", version, about = "Stratified complexes, perversities and intersection homology")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Target {
    /// Corpus entry name or path to a `.strat` file.
    pub input: String,
    /// Stratification inside the file; defaults to the first one.
    #[arg(long)]
    pub strat: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List strata with dimensions, representatives and link diagnostics.
    Strata {
        #[command(flatten)]
        target: Target,
    },
    /// Classify the fine strata of a coarsening.
    Classify {
        input: String,
        #[arg(long)]
        coarsening: Option<String>,
    },
    /// Check a perversity against the top perversity and, with a coarsening, the K-conditions.
    PervCheck {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "zero")]
        perversity: String,
        #[arg(long)]
        coarsening: Option<String>,
    },
    /// Push a fine perversity forward along a coarsening.
    Push {
        input: String,
        #[arg(long)]
        coarsening: Option<String>,
        #[arg(long, default_value = "zero")]
        perversity: String,
    },
    /// Pull a coarse perversity back along a coarsening.
    Pull {
        input: String,
        #[arg(long)]
        coarsening: Option<String>,
        #[arg(long, default_value = "zero")]
        perversity: String,
    },
    /// Intersection homology.
    Ih {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "zero")]
        perversity: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Components of the regular part, valid for perversities below the top one.
    Pi0 {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "zero")]
        perversity: String,
    },
    /// Presentation of the fundamental group of the regular part.
    Pi1Regular {
        #[command(flatten)]
        target: Target,
    },
    /// Compare intersection homology of a link and of its closed cone.
    ConeProbe {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "zero")]
        perversity: String,
        /// Perversity value at the cone apex.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        apex: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Compare the two stratifications of a cone on a sphere join.
    TwoConeProbe {
        /// Link; defaults to a trivially stratified circle.
        input: Option<String>,
        #[arg(long)]
        strat: Option<String>,
        /// Dimension of the sphere factor.
        #[arg(long, default_value_t = 2)]
        b: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        disk: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        apex: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Mayer-Vietoris check for the closed star of a vertex and its complement.
    MvCheck {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "zero")]
        perversity: String,
        #[arg(long)]
        vertex: Option<Vertex>,
    },
    /// Symbolic calculator on a space expression or a symbolic corpus entry.
    Calc {
        expression: String,
        #[arg(long, value_enum, default_value_t = Rule::Derive)]
        rule: Rule,
        /// `zero`, `top`, `list:v1,..` or `dual:v1,..` over the symbolic strata.
        #[arg(long)]
        perversity: Option<String>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// List corpus entries.
    CorpusList,
    /// Print the canonical `.strat` text of an entry.
    Emit { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Derive,
    Cone,
    Product,
    Pi0,
    /// Transfer from the fine side of a coarsening.
    Coarsen,
    /// Transfer from the coarse side of a coarsening.
    Refine,
}

struct Loaded {
    name: String,
    file: StratFile,
}

impl Loaded {
    fn new(input: &str, report: &mut Report) -> Result<Self, CliError> {
        let file = load(input)?;
        report.input(input, &emit(&file));
        Ok(Loaded { name: input.into(), file })
    }

    fn strat(&self, name: Option<&str>) -> Result<&NamedStrat, CliError> {
        match name {
            Some(n) => self.file.stratification(n).ok_or_else(|| usage(format!("{}: no stratification {n}", self.name))),
            None => Ok(&self.file.stratifications[0]),
        }
    }

    fn coarsening(&self, name: Option<&str>) -> Result<(String, Coarsening), CliError> {
        let decl = match name {
            Some(n) => self.file.coarsening(n).ok_or_else(|| usage(format!("{}: no coarsening {n}", self.name)))?,
            None => match &self.file.coarsenings[..] {
                [only] => only,
                [] => return Err(usage(format!("{} declares no coarsening", self.name))),
                _ => return Err(usage(format!("{} declares several coarsenings; pass --coarsening", self.name))),
            },
        };
        let fine = self.strat(Some(&decl.fine))?.strat.clone();
        let coarse = self.strat(Some(&decl.coarse))?.strat.clone();
        Ok((decl.name.clone(), Coarsening::new(fine, coarse)?))
    }
}

fn ext(s: &str) -> Result<ExtInt, CliError> {
    s.parse().map_err(|e: ParseExtIntError| usage(e.to_string()))
}

fn ext_list(s: &str) -> Result<Vec<ExtInt>, CliError> {
    s.split(',').map(|v| ext(v.trim())).collect()
}

/// `zero`, `top`, `codim:f1,f2,..`, `list:v0,v1,..` or a perversity named in the file.
pub fn parse_perversity(spec: &str, named: &NamedStrat) -> Result<Perversity, CliError> {
    let poset = named.strat.poset();
    Ok(match spec {
        "zero" => Perversity::zero(poset),
        "top" => Perversity::top(poset),
        _ => {
            if let Some(rest) = spec.strip_prefix("codim:") {
                let values: Vec<i64> = rest
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| usage(format!("invalid codimension value {v:?}"))))
                    .collect::<Result<_, _>>()?;
                Perversity::from_codim_fn(poset, &CodimFn::from_positive(&values))
            } else if let Some(rest) = spec.strip_prefix("list:") {
                Perversity::new(poset, ext_list(rest)?)?
            } else {
                named
                    .perversity(spec)
                    .cloned()
                    .ok_or_else(|| usage(format!("unknown perversity {spec:?} for stratification {}", named.name)))?
            }
        }
    })
}

fn sym_perversity(spec: Option<&str>, meta: &StrataMeta) -> Result<Vec<ExtInt>, CliError> {
    let poset = meta.poset();
    match spec.unwrap_or("zero") {
        "zero" => Ok(Perversity::zero(&poset).values().to_vec()),
        "top" => Ok(Perversity::top(&poset).values().to_vec()),
        s => {
            if let Some(rest) = s.strip_prefix("list:") {
                ext_list(rest)
            } else if let Some(rest) = s.strip_prefix("dual:") {
                let d = ext_list(rest)?;
                if d.len() != meta.len() {
                    return Err(usage(format!("expected {} dual values, got {}", meta.len(), d.len())));
                }
                Ok(from_dual(meta, &d))
            } else {
                Err(usage(format!("unknown symbolic perversity {s:?}")))
            }
        }
    }
}

fn group_text(g: &Group) -> String {
    let t: Vec<String> = g.torsion.iter().map(ToString::to_string).collect();
    format!("rank={} torsion=[{}]", g.rank, t.join(","))
}

fn word_text(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let letters: Vec<String> = w.iter().map(|&(g, e)| if e == 1 { format!("g{g}") } else { format!("g{g}^{e}") }).collect();
    letters.join(" ")
}

fn strata(t: &Target, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let named = loaded.strat(t.strat.as_deref())?;
    let s = &named.strat;
    r.line(format!("stratification {} formal_dim={} depth={}", named.name, s.formal_dim(), s.depth()));
    for st in s.strata() {
        r.line(format!(
            "stratum {} dim={} codim={} rep={} simplices={}{}",
            st.id,
            st.dim,
            s.poset().codim(st.id),
            s.representative(st.id),
            st.simplices.len(),
            if s.poset().is_regular(st.id) { " regular" } else { "" }
        ));
    }
    let d = s.cs_diagnostics();
    for i in &d.link_inconsistencies {
        r.line(format!("link inconsistency: stratum {} dim {}: {} vs {}", i.stratum, i.dim, i.first, i.second));
    }
    r.line(format!("regular components: {}", s.regular_components().1));
    r.line(format!("links consistent: {}", d.links_consistent()));
    r.line(format!("normal: {}", d.normal()));
    Ok(())
}

fn symbolic_for(input: &str) -> Option<String> {
    entry(input).and_then(|e| e.symbolic.map(str::to_string)).filter(|x| x.starts_with("coarsen("))
}

fn classify(input: &str, coarsening: Option<&str>, r: &mut Report) -> Result<(), CliError> {
    let file_backed = entry(input).is_none_or(|e| e.file.is_some());
    if !file_backed || (coarsening.is_none() && load(input).is_ok_and(|f| f.coarsenings.is_empty())) {
        let expr = symbolic_for(input).ok_or_else(|| usage(format!("{input} has no coarsening to classify")))?;
        let calc = calculator_from(&atoms_text()?)?;
        let space: SymSpace = expr.parse()?;
        let SymSpace::Coarsen(fine, _) = &space else { unreachable!("filtered on coarsen(") };
        let meta = calc.meta(fine)?;
        let (classes, map) = calc.classify(&space)?;
        r.line(format!("space: {space}"));
        for (s, class) in classes.iter().enumerate() {
            r.line(format!("stratum {s} dim={} -> {} class={class}", meta.strata[s].dim, map[s]));
        }
        r.line(format!("exceptional: {}", classes.iter().filter(|c| c.is_exceptional()).count()));
        return Ok(());
    }
    let loaded = Loaded::new(input, r)?;
    let (name, c) = loaded.coarsening(coarsening)?;
    r.line(format!("coarsening {name}"));
    for (s, class) in c.classes().iter().enumerate() {
        r.line(format!("stratum {s} dim={} -> {} class={class}", c.fine().strata()[s].dim, c.map()[s]));
    }
    r.line(format!("exceptional: {}", c.exceptional().len()));
    r.line(format!("simple: {}", c.is_simple()));
    Ok(())
}

fn perv_check(t: &Target, spec: &str, coarsening: Option<&str>, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let (named, c) = match coarsening {
        Some(_) => {
            let (_, c) = loaded.coarsening(coarsening)?;
            let fine = loaded.file.stratifications.iter().find(|n| n.strat == *c.fine()).unwrap();
            (fine, Some(c))
        }
        None => (loaded.strat(t.strat.as_deref())?, None),
    };
    let poset = named.strat.poset();
    let p = parse_perversity(spec, named)?;
    r.line(format!("p = {p}"));
    r.line(format!("Dp = {}", p.dual(poset)));
    let top = Perversity::top(poset);
    r.line(format!("t = {top}"));
    let excess = p.first_excess(&top);
    r.check("p <= t", excess.is_none(), excess.map_or("holds".into(), |s| format!("fails on stratum {s}")));
    if let Some(c) = c {
        let v = c.k_violation(&p);
        r.check("K-perversity", v.is_none(), v.map_or("K1 and K2 hold".into(), |v| v.to_string()));
    }
    Ok(())
}

fn push_pull(input: &str, coarsening: Option<&str>, spec: &str, push: bool, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(input, r)?;
    let (name, c) = loaded.coarsening(coarsening)?;
    let side = if push { c.fine() } else { c.coarse() };
    let named = loaded.file.stratifications.iter().find(|n| n.strat == *side).unwrap();
    let p = parse_perversity(spec, named)?;
    r.line(format!("coarsening {name}"));
    if push {
        let out = c.pushforward(&p);
        r.line(format!("p = {p}"));
        r.line(format!("pushforward = {}", out.perversity));
        if !out.neg_inf_mattered.is_empty() {
            r.line(format!("-inf reached the infimum on coarse strata {:?}", out.neg_inf_mattered));
        }
    } else {
        r.line(format!("q = {p}"));
        let back = c.pullback(&p);
        r.line(format!("pullback = {back}"));
        r.check("push after pull returns q", c.pushforward(&back).perversity == p, "exact equality");
    }
    Ok(())
}

fn ih(t: &Target, spec: &str, ring: &str, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let named = loaded.strat(t.strat.as_deref())?;
    let p = parse_perversity(spec, named)?;
    let ring: Ring = ring.parse()?;
    r.line(format!("stratification {} perversity {p}", named.name));
    r.text(&intersection_homology(&named.strat, &p, ring)?.lines("IH"));
    Ok(())
}

fn pi0(t: &Target, spec: &str, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let named = loaded.strat(t.strat.as_deref())?;
    let p = parse_perversity(spec, named)?;
    let out = pi0_p(&named.strat, &p)?;
    r.line(format!("pi0 count={}", out.count));
    Ok(())
}

fn pi1(t: &Target, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let named = loaded.strat(t.strat.as_deref())?;
    let g = pi1_regular(&named.strat, None)?.simplify();
    r.line(format!("generators {}", g.generators));
    for w in &g.relators {
        r.line(format!("relator {}", word_text(w)));
    }
    r.line(format!("abelianization {}", group_text(&g.abelianization())));
    r.line(format!("visibly trivial: {}", g.is_visibly_trivial()));
    Ok(())
}

fn cone_probe(t: &Target, spec: &str, apex: &str, ring: &str, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let named = loaded.strat(t.strat.as_deref())?;
    let p = parse_perversity(spec, named)?;
    let ring: Ring = ring.parse()?;
    let offset = calibrate_cone_offset(ring)?;
    let probe = cone_threshold_probe(&named.strat, &p, ext(apex)?, ring, offset)?;
    r.line(format!("calibrated offset {offset}"));
    r.text(&probe.link_ih.lines("IH_link"));
    r.text(&probe.cone_ih.lines("IH_cone"));
    r.line(format!("Dp(v) = {} predicted through {} agree through {}", probe.dual_apex, probe.predicted, probe.iso_through));
    r.check("cone formula", probe.consistent, format!("predicted {}, observed {}", probe.predicted, probe.iso_through));
    Ok(())
}

struct TwoConeArgs<'a> {
    input: Option<&'a str>,
    strat: Option<&'a str>,
    b: usize,
    disk: &'a str,
    apex: &'a str,
    ring: &'a str,
}

fn two_cone(a: TwoConeArgs<'_>, r: &mut Report) -> Result<(), CliError> {
    if a.b == 0 {
        return Err(usage("--b must be positive"));
    }
    let (link, p) = match a.input {
        Some(input) => {
            let loaded = Loaded::new(input, r)?;
            let named = loaded.strat(a.strat)?;
            (named.strat.clone(), Perversity::zero(named.strat.poset()))
        }
        None => {
            let s = Stratification::trivial(SimplicialComplex::sphere(1, 0))?;
            let p = Perversity::zero(s.poset());
            (s, p)
        }
    };
    let ring: Ring = a.ring.parse()?;
    let offset = calibrate_two_cone_offset(ring)?;
    let values = TwoConeValues { link: p, disk: ext(a.disk)?, apex: ext(a.apex)? };
    let probe = two_cone_probe(a.b, &link, &values, ring, offset)?;
    r.line(format!("calibrated offset {offset}"));
    r.text(&probe.refined_ih.lines("IH_refined"));
    r.text(&probe.coarse_ih.lines("IH_coarse"));
    r.line(format!("Dp(u,v) = {} Dq(v) = {}", probe.dual_apex, probe.dual_disk));
    if let Some(v) = &probe.k_violation {
        r.line(format!("not a K-perversity: {v}"));
    }
    r.check("agreement through the predicted degree", probe.consistent, format!("predicted {}, observed {}", probe.predicted, probe.agree_through));
    Ok(())
}

fn mv(t: &Target, spec: &str, vertex: Option<Vertex>, r: &mut Report) -> Result<(), CliError> {
    let loaded = Loaded::new(&t.input, r)?;
    let named = loaded.strat(t.strat.as_deref())?;
    let s = &named.strat;
    let p = parse_perversity(spec, named)?;
    let x = s.complex();
    let v = match vertex {
        Some(v) => v,
        None => *s.singular_set().vertices().first().or(x.vertices().first()).ok_or_else(|| usage("empty complex"))?,
    };
    let star = x.closed_star(&Simplex::vertex(v)).map_err(|_| usage(format!("{v} is not a vertex")))?;
    let rest = x.full_subcomplex(|w| w != v);
    let m = mv_exactness_check(s, &p, &star, &rest)?;
    r.line(format!("cover: closed star of {v} and the full subcomplex without it"));
    for (k, d) in m.degrees.iter().enumerate() {
        r.line(format!("degree {k}: IH(U)={} IH(V)={} IH(UnV)={} IH(X)={}", d.ih_u, d.ih_v, d.ih_uv, d.ih_x));
    }
    r.check("Mayer-Vietoris exact", m.exact(), format!("euler defect {}", m.euler_defect));
    Ok(())
}

fn calc(expression: &str, rule: Rule, spec: Option<&str>, degree: usize, r: &mut Report) -> Result<(), CliError> {
    let mut calc: Calculator = calculator_from(&atoms_text()?)?;
    let text = entry(expression).and_then(|e| e.symbolic).unwrap_or(expression);
    let space: SymSpace = text.parse()?;
    r.line(format!("space: {space}"));
    let meta = calc.meta(&space)?;
    for (i, s) in meta.strata.iter().enumerate() {
        r.line(format!("symbolic stratum {i} dim={}", s.dim));
    }
    let fact = match rule {
        Rule::Derive => calc.derive(&space, &sym_perversity(spec, &meta)?, degree)?,
        Rule::Cone => calc.rule_cone(&space, &sym_perversity(spec, &meta)?, degree)?,
        Rule::Product => calc.rule_product(&space, &sym_perversity(spec, &meta)?, degree)?,
        Rule::Pi0 => calc.rule_pi0(&space, &sym_perversity(spec, &meta)?)?,
        Rule::Coarsen | Rule::Refine => {
            let SymSpace::Coarsen(fine, _) = &space else { return Err(usage("coarsening rules need coarsen(..)")) };
            if rule == Rule::Coarsen {
                let p = sym_perversity(spec, &calc.meta(fine)?)?;
                calc.rule_coarsen(&space, SidedPerversity::Fine(p), degree)?
            } else {
                calc.rule_coarsen(&space, SidedPerversity::Coarse(sym_perversity(spec, &meta)?), degree)?
            }
        }
    };
    r.line(format!("result: {fact}"));
    r.text(&calc.dump());
    let c = calc.consistency_check();
    r.check("fact base consistent", c.consistent(), format!("{} requests compared", c.requests_checked));
    Ok(())
}

fn corpus_list(r: &mut Report) {
    for e in corpus() {
        let kind = match (&e.file, e.symbolic) {
            (Some(_), Some(_)) => "triangulated+symbolic",
            (Some(_), None) => "triangulated",
            (None, _) => "symbolic",
        };
        r.line(format!("{} [{kind}] {}", e.name, e.description));
        for x in &e.expected {
            r.line(format!("  {} {}", x.source, x.check));
        }
    }
}

/// Runs one parsed command into `report`.
pub fn execute(cli: &Cli, report: &mut Report) -> Result<(), CliError> {
    match &cli.command {
        Command::Strata { target } => strata(target, report),
        Command::Classify { input, coarsening } => classify(input, coarsening.as_deref(), report),
        Command::PervCheck { target, perversity, coarsening } => perv_check(target, perversity, coarsening.as_deref(), report),
        Command::Push { input, coarsening, perversity } => push_pull(input, coarsening.as_deref(), perversity, true, report),
        Command::Pull { input, coarsening, perversity } => push_pull(input, coarsening.as_deref(), perversity, false, report),
        Command::Ih { target, perversity, ring } => ih(target, perversity, ring, report),
        Command::Pi0 { target, perversity } => pi0(target, perversity, report),
        Command::Pi1Regular { target } => pi1(target, report),
        Command::ConeProbe { target, perversity, apex, ring } => cone_probe(target, perversity, apex, ring, report),
        Command::TwoConeProbe { input, strat, b, disk, apex, ring } => two_cone(
            TwoConeArgs { input: input.as_deref(), strat: strat.as_deref(), b: *b, disk, apex, ring },
            report,
        ),
        Command::MvCheck { target, perversity, vertex } => mv(target, perversity, *vertex, report),
        Command::Calc { expression, rule, perversity, degree } => calc(expression, *rule, perversity.as_deref(), *degree, report),
        Command::Verify { suite, seed } => {
            let out = suites::run(suite, *seed).map_err(|e| match e {
                SuiteError::Unknown(s) => usage(format!("unknown suite {s:?}; known: all, {}", suites::SUITES.join(", "))),
                e => e.into(),
            })?;
            report.absorb(out);
            Ok(())
        }
        Command::CorpusList => {
            corpus_list(report);
            Ok(())
        }
        Command::Emit { name } => {
            let file = load(name)?;
            report.text(&emit(&file));
            Ok(())
        }
    }
}

/// Output text and exit code for an argument vector without the program name.
pub fn run_command<S: AsRef<str>>(args: &[S]) -> (String, i32) {
    let argv: Vec<&str> = std::iter::once("stratum").chain(args.iter().map(AsRef::as_ref)).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    // `emit` prints the bare file so that its output can be saved and parsed
    if let Command::Emit { name } = &cli.command {
        return match load(name) {
            Ok(f) => (emit(&f), 0),
            Err(e) => (format!("error: {e}\n"), 2),
        };
    }
    let mut report = Report::new(argv.join(" "));
    match execute(&cli, &mut report) {
        Ok(()) => {
            let code = report.exit_code();
            (report.render(), code)
        }
        Err(e) => {
            report.line(format!("error: {e}"));
            (report.render(), 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (String, i32) {
        run_command(args)
    }

    #[test]
    fn perversity_specs() {
        let f = load("suspension_torus").unwrap();
        let n = &f.stratifications[0];
        assert_eq!(parse_perversity("zero", n).unwrap(), Perversity::zero(n.strat.poset()));
        let p = parse_perversity("codim:0,0,1", n).unwrap();
        assert!(p.values().iter().any(|v| *v == stratum_core::extint::Finite(1)));
        assert!(parse_perversity("list:0", n).is_err());
        assert!(matches!(parse_perversity("nonsense", n), Err(CliError::Usage(_))));
    }

    #[test]
    fn ih_lines() {
        let (out, code) = run(&["ih", "pinched_torus", "--perversity", "zero", "--ring", "Z", "--strat", "fine"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("IH[0] rank=1 torsion=[] ring=Z\nIH[1] rank=0 torsion=[] ring=Z\nIH[2] rank=1 torsion=[] ring=Z\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(&["ih", "no_such_entry"]).1, 2);
        assert_eq!(run(&["frobnicate"]).1, 2);
        assert_eq!(run(&["verify", "nope"]).1, 2);
        assert_eq!(run(&["ih", "pinched_torus", "--ring", "F4"]).1, 2);
    }

    #[test]
    fn failed_check_exits_one() {
        let (out, code) = run(&["perv-check", "real_line_point", "--coarsening", "forget", "--perversity", "list:0,0,0"]);
        assert_eq!(code, 1, "{out}");
        assert!(out.contains("FAIL K-perversity"));
    }

    #[test]
    fn symbolic_classification() {
        let (out, code) = run(&["classify", "double_suspension_poincare"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.matches("class=exceptional").count(), 4);
    }
}
