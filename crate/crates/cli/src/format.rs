//! The `.strat` text format.
//!
//! ```text
//! # comment
//! stratification fine        (optional header; default name "main")
//! dim 2
//! facets
//! 0 1 2
//! skeleton 0:
//! 9
//! perversity zero:
//! 0 0
//! stratification coarse
//! dim 2
//! coarsening pinch fine coarse
//! ```
//!
//! The `facets` block appears once and is shared by every stratification in
//! the file. Skeleton and perversity blocks belong to the most recent
//! stratification header. Perversity values are integers, `inf` or `-inf`;
//! strata without a line get `0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use stratum_core::extint::ExtInt;
use stratum_core::perv::PervError;
use stratum_core::strat::StratError;
use stratum_core::{Perversity, Simplex, SimplicialComplex, Stratification, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("no facets block")]
    NoFacets,
    #[error("facet on line {line}: {message}")]
    Facet { line: usize, message: String },
    #[error("stratification {name}: no dim line")]
    NoDim { name: String },
    #[error("stratification {name}: {source}")]
    Strat { name: String, source: StratError },
    #[error("stratification {name}, perversity {perversity}: stratum {id} does not exist")]
    UnknownStratum { name: String, perversity: String, id: usize },
    #[error("stratification {name}, perversity {perversity}: {source}")]
    Perversity { name: String, perversity: String, source: PervError },
    #[error("duplicate name {0}")]
    Duplicate(String),
    #[error("coarsening {coarsening} names unknown stratification {name}")]
    UnknownStratification { coarsening: String, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// A stratification with its named perversities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedStrat {
    pub name: String,
    pub strat: Stratification,
    pub perversities: Vec<(String, Perversity)>,
}

impl NamedStrat {
    pub fn new(name: &str, strat: Stratification) -> Self {
        NamedStrat { name: name.into(), strat, perversities: Vec::new() }
    }

    pub fn perversity(&self, name: &str) -> Option<&Perversity> {
        self.perversities.iter().find(|p| p.0 == name).map(|p| &p.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseningDecl {
    pub name: String,
    pub fine: String,
    pub coarse: String,
}

/// Contents of one `.strat` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratFile {
    pub complex: SimplicialComplex,
    pub stratifications: Vec<NamedStrat>,
    pub coarsenings: Vec<CoarseningDecl>,
}

impl StratFile {
    pub fn single(strat: Stratification) -> Self {
        StratFile {
            complex: strat.complex().clone(),
            stratifications: vec![NamedStrat::new("main", strat)],
            coarsenings: Vec::new(),
        }
    }

    pub fn stratification(&self, name: &str) -> Option<&NamedStrat> {
        self.stratifications.iter().find(|s| s.name == name)
    }

    pub fn coarsening(&self, name: &str) -> Option<&CoarseningDecl> {
        self.coarsenings.iter().find(|c| c.name == name)
    }
}

/// Syntax tree before any stratification is built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub facets: Option<Vec<(usize, Vec<String>)>>,
    pub blocks: Vec<StratBlock>,
    pub coarsenings: Vec<CoarseningDecl>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StratBlock {
    pub name: String,
    pub dim: Option<usize>,
    pub skeleta: Vec<(usize, Vec<(usize, Vec<String>)>)>,
    pub perversities: Vec<(String, Vec<(usize, ExtInt)>)>,
}

enum Section {
    None,
    Facets,
    Skeleton,
    Perversity,
}

fn is_token(t: &str) -> bool {
    !t.is_empty() && t.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn is_value(t: &str) -> bool {
    is_token(t.strip_prefix('-').unwrap_or(t))
}

/// Whitespace-separated words with 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn block_header<'a>(w: &[(usize, &'a str)], line: usize) -> Result<&'a str, ParseError> {
    match w {
        [_, (c, arg)] => {
            let Some(arg) = arg.strip_suffix(':') else { return Err(err(line, *c, "expected ':' after the block argument")) };
            if !is_token(arg) {
                return Err(err(line, *c, format!("invalid token {arg:?}")));
            }
            Ok(arg)
        }
        [(c, _)] => Err(err(line, *c, "missing block argument")),
        [_, _, (c, _), ..] => Err(err(line, *c, "unexpected token")),
        [] => unreachable!("blank lines are skipped"),
    }
}

/// Syntax pass: tokens, block structure and numeric fields.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut doc = Document::default();
    let mut section = Section::None;
    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        if raw.contains('\r') {
            return Err(err(line, raw.find('\r').unwrap() + 1, "carriage return; use LF line endings"));
        }
        let content = raw.split('#').next().unwrap();
        let w = words(content);
        let Some(&(col, head)) = w.first() else { continue };
        match head {
            "stratification" => {
                let [_, (c, name)] = w[..] else { return Err(err(line, col, "expected `stratification <name>`")) };
                if !is_token(name) {
                    return Err(err(line, c, format!("invalid token {name:?}")));
                }
                doc.blocks.push(StratBlock { name: name.into(), ..Default::default() });
                section = Section::None;
            }
            "dim" => {
                let [_, (c, n)] = w[..] else { return Err(err(line, col, "expected `dim <n>`")) };
                let n: usize = n.parse().map_err(|_| err(line, c, format!("invalid dimension {n:?}")))?;
                if doc.blocks.is_empty() {
                    doc.blocks.push(StratBlock { name: "main".into(), ..Default::default() });
                }
                let b = doc.blocks.last_mut().unwrap();
                if b.dim.is_some() {
                    return Err(err(line, col, format!("second dim line for stratification {}", b.name)));
                }
                b.dim = Some(n);
                section = Section::None;
            }
            "facets" => {
                if w.len() > 1 {
                    return Err(err(line, w[1].0, "unexpected token after `facets`"));
                }
                if doc.facets.is_some() {
                    return Err(err(line, col, "second facets block"));
                }
                doc.facets = Some(Vec::new());
                section = Section::Facets;
            }
            "skeleton" => {
                let arg = block_header(&w, line)?;
                let index: usize = arg.parse().map_err(|_| err(line, w[1].0, format!("invalid skeleton index {arg:?}")))?;
                let Some(b) = doc.blocks.last_mut() else { return Err(err(line, col, "skeleton before any dim line")) };
                if b.skeleta.iter().any(|s| s.0 == index) {
                    return Err(err(line, w[1].0, format!("skeleton {index} given twice")));
                }
                b.skeleta.push((index, Vec::new()));
                section = Section::Skeleton;
            }
            "perversity" => {
                let name = block_header(&w, line)?;
                let Some(b) = doc.blocks.last_mut() else { return Err(err(line, col, "perversity before any dim line")) };
                b.perversities.push((name.into(), Vec::new()));
                section = Section::Perversity;
            }
            "coarsening" => {
                let [_, (c1, name), (c2, fine), (c3, coarse)] = w[..] else {
                    return Err(err(line, col, "expected `coarsening <name> <fine> <coarse>`"));
                };
                for (c, t) in [(c1, name), (c2, fine), (c3, coarse)] {
                    if !is_token(t) {
                        return Err(err(line, c, format!("invalid token {t:?}")));
                    }
                }
                doc.coarsenings.push(CoarseningDecl { name: name.into(), fine: fine.into(), coarse: coarse.into() });
                section = Section::None;
            }
            _ => match section {
                Section::None => return Err(err(line, col, format!("unexpected {head:?} outside a block"))),
                Section::Facets | Section::Skeleton => {
                    let mut toks = Vec::with_capacity(w.len());
                    for &(c, t) in &w {
                        if !is_token(t) {
                            return Err(err(line, c, format!("invalid vertex token {t:?}")));
                        }
                        toks.push(t.to_string());
                    }
                    if let Section::Facets = section {
                        doc.facets.as_mut().unwrap().push((line, toks));
                    } else {
                        doc.blocks.last_mut().unwrap().skeleta.last_mut().unwrap().1.push((line, toks));
                    }
                }
                Section::Perversity => {
                    let [(c1, id), (c2, value)] = w[..] else {
                        return Err(err(line, col, "expected `<stratum-id> <value>`"));
                    };
                    let id: usize = id.parse().map_err(|_| err(line, c1, format!("invalid stratum id {id:?}")))?;
                    if !is_value(value) {
                        return Err(err(line, c2, format!("invalid value token {value:?}")));
                    }
                    let v: ExtInt = value.parse().map_err(|_| err(line, c2, format!("invalid perversity value {value:?}")))?;
                    doc.blocks.last_mut().unwrap().perversities.last_mut().unwrap().1.push((id, v));
                }
            },
        }
    }
    Ok(doc)
}

/// Maps vertex tokens to labels: numerals keep their value, other names get
/// fresh labels above the largest numeral in order of first appearance.
struct VertexNames {
    names: BTreeMap<String, Vertex>,
    next: Vertex,
}

impl VertexNames {
    fn new(doc: &Document) -> Self {
        let all = doc.facets.iter().flatten().chain(doc.blocks.iter().flat_map(|b| b.skeleta.iter().flat_map(|s| s.1.iter())));
        let max = all.flat_map(|(_, t)| t.iter()).filter_map(|t| t.parse::<Vertex>().ok()).max();
        VertexNames { names: BTreeMap::new(), next: max.map_or(0, |m| m + 1) }
    }

    fn get(&mut self, t: &str) -> Vertex {
        if let Ok(v) = t.parse::<Vertex>() {
            return v;
        }
        if let Some(&v) = self.names.get(t) {
            return v;
        }
        let v = self.next;
        self.next += 1;
        self.names.insert(t.into(), v);
        v
    }

    fn simplex(&mut self, line: usize, toks: &[String]) -> Result<Simplex, BuildError> {
        let vs: Vec<Vertex> = toks.iter().map(|t| self.get(t)).collect();
        Simplex::new(vs).map_err(|e| BuildError::Facet { line, message: e.to_string() })
    }
}

impl Document {
    /// Semantic pass: builds the complex, the stratifications and the perversities.
    pub fn build(&self) -> Result<StratFile, BuildError> {
        let facets = self.facets.as_ref().ok_or(BuildError::NoFacets)?;
        let mut names = VertexNames::new(self);
        let mut list = Vec::with_capacity(facets.len());
        for (line, toks) in facets {
            list.push(names.simplex(*line, toks)?);
        }
        let complex = SimplicialComplex::from_simplices(list);
        let mut stratifications: Vec<NamedStrat> = Vec::new();
        for b in &self.blocks {
            if stratifications.iter().any(|s| s.name == b.name) {
                return Err(BuildError::Duplicate(b.name.clone()));
            }
            let n = b.dim.ok_or_else(|| BuildError::NoDim { name: b.name.clone() })?;
            let mut skeleta = Vec::with_capacity(b.skeleta.len());
            for (i, lines) in &b.skeleta {
                let mut fs = Vec::with_capacity(lines.len());
                for (line, toks) in lines {
                    fs.push(names.simplex(*line, toks)?);
                }
                skeleta.push((*i, fs));
            }
            let strat = Stratification::new(complex.clone(), n, &skeleta)
                .map_err(|source| BuildError::Strat { name: b.name.clone(), source })?;
            let mut named = NamedStrat::new(&b.name, strat);
            for (pname, values) in &b.perversities {
                if named.perversities.iter().any(|p| &p.0 == pname) {
                    return Err(BuildError::Duplicate(format!("{}/{pname}", b.name)));
                }
                let len = named.strat.strata().len();
                let mut v = vec![ExtInt::ZERO; len];
                for &(id, value) in values {
                    if id >= len {
                        return Err(BuildError::UnknownStratum { name: b.name.clone(), perversity: pname.clone(), id });
                    }
                    v[id] = value;
                }
                let p = Perversity::new(named.strat.poset(), v).map_err(|source| BuildError::Perversity {
                    name: b.name.clone(),
                    perversity: pname.clone(),
                    source,
                })?;
                named.perversities.push((pname.clone(), p));
            }
            stratifications.push(named);
        }
        if stratifications.is_empty() {
            return Err(BuildError::NoDim { name: "main".into() });
        }
        for c in &self.coarsenings {
            for name in [&c.fine, &c.coarse] {
                if !stratifications.iter().any(|s| &s.name == name) {
                    return Err(BuildError::UnknownStratification { coarsening: c.name.clone(), name: name.clone() });
                }
            }
        }
        Ok(StratFile { complex, stratifications, coarsenings: self.coarsenings.clone() })
    }
}

/// Parses and builds a `.strat` file.
pub fn parse_strat_file(text: &str) -> Result<StratFile, FormatError> {
    Ok(parse_document(text)?.build()?)
}

fn push_simplex(out: &mut String, s: &Simplex) {
    for (i, v) in s.vertices().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

/// Canonical text. The header line is omitted for a lone stratification
/// named `main`.
pub fn emit(file: &StratFile) -> String {
    let mut out = String::new();
    let lone = file.stratifications.len() == 1 && file.stratifications[0].name == "main";
    for (k, named) in file.stratifications.iter().enumerate() {
        if !lone {
            let _ = writeln!(out, "stratification {}", named.name);
        }
        let s = &named.strat;
        let _ = writeln!(out, "dim {}", s.formal_dim());
        if k == 0 {
            out.push_str("facets\n");
            for f in file.complex.facets() {
                push_simplex(&mut out, f);
            }
        }
        for (i, facets) in s.skeleta() {
            if i == s.formal_dim() || facets.is_empty() {
                continue;
            }
            let _ = writeln!(out, "skeleton {i}:");
            for f in &facets {
                push_simplex(&mut out, f);
            }
        }
        for (name, p) in &named.perversities {
            let _ = writeln!(out, "perversity {name}:");
            for st in s.poset().singular() {
                let _ = writeln!(out, "{st} {}", p.value(st));
            }
        }
    }
    for c in &file.coarsenings {
        let _ = writeln!(out, "coarsening {} {} {}", c.name, c.fine, c.coarse);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = parse_strat_file("dim 1\nfacets\n0 1\n").unwrap();
        assert_eq!(f.complex.f_vector(), [2, 1]);
        let s = &f.stratifications[0];
        assert_eq!(s.name, "main");
        assert_eq!(s.strat.strata().len(), 1);
    }

    #[test]
    fn malformed_skeleton_index() {
        let e = parse_document("dim 1\nfacets\n0 1\nskeleton x:\n0\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 10));
        let e = parse_document("dim 1\nfacets\n0 1\nskeleton 0\n0\n").unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn bad_tokens_and_line_endings() {
        assert_eq!(parse_document("dim 1\nfacets\n0 a-b\n").unwrap_err().column, 3);
        assert_eq!(parse_document("dim 1\r\n").unwrap_err().line, 1);
        assert!(parse_document("0 1\n").is_err());
    }

    #[test]
    fn named_vertices_and_comments() {
        let f = parse_strat_file("# a path\ndim 1\nfacets\n0 a # first\na b\nskeleton 0:\na\nperversity low:\n0 -inf\n").unwrap();
        let s = &f.stratifications[0];
        assert_eq!(f.complex.vertices(), [0, 1, 2]);
        assert_eq!(s.strat.poset().singular().count(), 1);
        assert_eq!(s.perversity("low").unwrap().value(0), ExtInt::NegInf);
    }

    #[test]
    fn semantic_errors_are_deferred() {
        let doc = parse_document("dim 0\nfacets\n0 1\n").unwrap();
        assert!(matches!(doc.build(), Err(BuildError::Strat { .. })));
        let doc = parse_document("dim 1\nfacets\n0 1\nskeleton 0:\n0\nperversity p:\n7 1\n").unwrap();
        assert!(matches!(doc.build(), Err(BuildError::UnknownStratum { id: 7, .. })));
        let doc = parse_document("dim 1\nfacets\n0 1\ncoarsening c main other\n").unwrap();
        assert!(matches!(doc.build(), Err(BuildError::UnknownStratification { .. })));
    }

    #[test]
    fn multi_stratification_round_trip() {
        let text = "stratification fine\ndim 1\nfacets\n0 1\n1 2\nskeleton 0:\n1\nperversity p:\n0 -2\nstratification coarse\ndim 1\ncoarsening c fine coarse\n";
        let f = parse_strat_file(text).unwrap();
        assert_eq!(emit(&f), text);
        assert_eq!(parse_strat_file(&emit(&f)).unwrap(), f);
    }
}
