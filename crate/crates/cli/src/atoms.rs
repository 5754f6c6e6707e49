//! `atoms.decl`: one `atom <name> key=value ...` line per atom.

use stratum_core::symcalc::{AtomDecl, Calculator, Provenance, SymError, SymGroup};

use crate::corpus::corpus_dir;
use crate::format::ParseError;

const SHIPPED: &str = include_str!("../corpus/atoms.decl");

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

pub fn parse_group(t: &str) -> SymGroup {
    match t {
        "trivial" => SymGroup::Trivial,
        "Z" => SymGroup::free(1),
        "unknown" => SymGroup::Unknown("declared unknown".into()),
        _ => match t.strip_prefix("Z^").and_then(|n| n.parse().ok()) {
            Some(n) => SymGroup::free(n),
            None => SymGroup::NamedAtom(t.into()),
        },
    }
}

fn parse_bool(line: usize, column: usize, v: &str) -> Result<bool, ParseError> {
    v.parse().map_err(|_| err(line, column, format!("expected true or false, got {v:?}")))
}

fn parse_list<T>(
    line: usize,
    column: usize,
    v: &str,
    item: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>, ParseError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| item(x).ok_or_else(|| err(line, column, format!("invalid list item {x:?}")))).collect()
}

/// Parses every `atom` line; blank lines and `#` comments are skipped.
pub fn parse_atoms(text: &str) -> Result<Vec<AtomDecl>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap();
        let mut col = 1;
        let mut words = Vec::new();
        for w in content.split(' ') {
            if !w.is_empty() {
                words.push((col, w));
            }
            col += w.len() + 1;
        }
        let Some(&(c0, head)) = words.first() else { continue };
        if head != "atom" {
            return Err(err(line, c0, format!("expected `atom`, got {head:?}")));
        }
        let Some(&(_, name)) = words.get(1) else { return Err(err(line, c0, "missing atom name")) };
        let mut d = AtomDecl::manifold(name, 0, Vec::new(), Vec::new());
        for &(c, w) in &words[2..] {
            let Some((key, value)) = w.split_once('=') else { return Err(err(line, c, format!("expected key=value, got {w:?}"))) };
            let vc = c + key.len() + 1;
            match key {
                "dim" => d.dim = value.parse().map_err(|_| err(line, vc, "invalid dimension"))?,
                "components" => d.regular_components = value.parse().map_err(|_| err(line, vc, "invalid count"))?,
                "betti" => d.betti = parse_list(line, vc, value, |x| x.parse().ok())?,
                "pi" => {
                    d.pi = parse_list(line, vc, value, |x| {
                        let (l, g) = x.split_once(':')?;
                        Some((l.parse().ok()?, parse_group(g)))
                    })?
                }
                "singular" => {
                    d.singular = parse_list(line, vc, value, |x| {
                        let (k, l) = x.split_once(':')?;
                        Some((k.parse().ok()?, l.to_string()))
                    })?
                }
                "regular_pi1" => d.regular_pi1 = Some(parse_group(value)),
                "connected" => d.connected = parse_bool(line, vc, value)?,
                "normal" => d.normal = parse_bool(line, vc, value)?,
                "pre_thom_mather" => d.pre_thom_mather = parse_bool(line, vc, value)?,
                "provenance" => {
                    d.provenance = match value {
                        "declared" => Provenance::Declared,
                        "paper" => Provenance::Paper,
                        _ => return Err(err(line, vc, format!("unknown provenance {value:?}"))),
                    }
                }
                _ => return Err(err(line, c, format!("unknown key {key:?}"))),
            }
        }
        out.push(d);
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
pub enum AtomsError {
    #[error("atoms.decl {0}")]
    Parse(#[from] ParseError),
    #[error("atoms.decl: {0}")]
    Io(#[from] std::io::Error),
    #[error("atoms.decl: {0}")]
    Declare(#[from] SymError),
}

/// Text of `atoms.decl` from the corpus directory, or the copy built into
/// the binary when the directory has none.
pub fn atoms_text() -> Result<String, AtomsError> {
    let path = corpus_dir().join("atoms.decl");
    if path.is_file() {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(SHIPPED.to_string())
    }
}

/// A calculator with every atom of `text` declared, in file order.
pub fn calculator_from(text: &str) -> Result<Calculator, AtomsError> {
    let mut calc = Calculator::new();
    for d in parse_atoms(text)? {
        calc.declare_atom(d)?;
    }
    Ok(calc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_atoms_declare() {
        let calc = calculator_from(SHIPPED).unwrap();
        let names: Vec<&str> = calc.atoms().map(|a| a.name.as_str()).collect();
        for n in ["S0", "S5", "P", "T", "S1+S1", "T2"] {
            assert!(names.contains(&n), "{n}");
        }
    }

    #[test]
    fn groups() {
        assert_eq!(parse_group("Z^3"), SymGroup::free(3));
        assert_eq!(parse_group("trivial"), SymGroup::Trivial);
        assert_eq!(parse_group("G"), SymGroup::NamedAtom("G".into()));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_atoms("atom X dim=q\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 12));
        let e = parse_atoms("\nthing\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_atoms("atom X color=red").is_err());
    }

    #[test]
    fn inconsistent_declaration_is_rejected() {
        assert!(matches!(calculator_from("atom X dim=2 pi=1:Z betti=1,0,1\n"), Err(AtomsError::Declare(_))));
    }
}
