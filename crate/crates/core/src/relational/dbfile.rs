//! The text format for databases:
//!
//! ```text
//! # comment
//! constants: a, b
//! predicates: P/1, Q/1
//! facts:
//! P(a). P(b).
//! Q(a).
//! constraints:
//! forall x. ~(P(x) & Q(x))
//! ```
//!
//! Facts end with `.`; any number may share a line. Each constraint line
//! holds one closed formula.

use thiserror::Error;

use super::{FactBasis, GroundAtom, RelationalDatabase, RelationalLanguage};
use crate::syntax::{parse_formula, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DbParseError {
    pub line: usize,
    pub message: String,
}

#[derive(PartialEq)]
enum Section {
    Header,
    Facts,
    Constraints,
}

fn err(line: usize, message: impl Into<String>) -> DbParseError {
    DbParseError { line, message: message.into() }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn parse_database(text: &str) -> Result<RelationalDatabase, DbParseError> {
    let mut constants: Option<Vec<String>> = None;
    let mut predicates: Option<Vec<(String, usize)>> = None;
    let mut lang: Option<RelationalLanguage> = None;
    let mut section = Section::Header;
    let mut facts = Vec::new();
    let mut constraints = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("constants:") {
            if section != Section::Header || constants.is_some() {
                return Err(err(line_no, "`constants:` must appear once, before `facts:`"));
            }
            constants = Some(split_list(rest).map(str::to_string).collect());
            continue;
        }
        if let Some(rest) = line.strip_prefix("predicates:") {
            if section != Section::Header || predicates.is_some() {
                return Err(err(line_no, "`predicates:` must appear once, before `facts:`"));
            }
            let mut list = Vec::new();
            for item in split_list(rest) {
                let (name, arity) = item
                    .split_once('/')
                    .ok_or_else(|| err(line_no, format!("expected NAME/ARITY, found `{item}`")))?;
                let arity: usize = arity
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad arity in `{item}`")))?;
                list.push((name.trim().to_string(), arity));
            }
            predicates = Some(list);
            continue;
        }
        if line == "facts:" || line == "constraints:" {
            let next = if line == "facts:" { Section::Facts } else { Section::Constraints };
            if next == Section::Facts && section != Section::Header {
                return Err(err(line_no, "`facts:` must come before `constraints:`"));
            }
            if section == next {
                return Err(err(line_no, format!("duplicate `{line}` section")));
            }
            if lang.is_none() {
                let cs = constants.clone().unwrap_or_default();
                let ps = predicates.clone().unwrap_or_default();
                let mut sig = Signature::new();
                for c in &cs {
                    sig.add_constant(c).map_err(|e| err(line_no, e.to_string()))?;
                }
                for (p, n) in &ps {
                    sig.add_predicate(p, *n).map_err(|e| err(line_no, e.to_string()))?;
                }
                lang = Some(RelationalLanguage::new(sig).map_err(|e| err(line_no, e.to_string()))?);
            }
            section = next;
            continue;
        }
        let Some(language) = lang.as_ref() else {
            return Err(err(line_no, format!("unexpected line `{line}` before `facts:` or `constraints:`")));
        };
        match section {
            Section::Header => unreachable!("language exists only after a section header"),
            Section::Facts => {
                let Some(body) = line.strip_suffix('.') else {
                    return Err(err(line_no, "facts must end with `.`"));
                };
                for item in body.split('.') {
                    let item = item.trim();
                    if item.is_empty() {
                        return Err(err(line_no, "empty fact"));
                    }
                    let f = parse_formula(item, language.signature()).map_err(|e| err(line_no, e.to_string()))?;
                    let atom = GroundAtom::from_formula(&f)
                        .filter(|a| language.is_atom(a))
                        .ok_or_else(|| err(line_no, format!("`{item}` is not an atomic fact")))?;
                    facts.push(atom);
                }
            }
            Section::Constraints => {
                let f = parse_formula(line, language.signature()).map_err(|e| err(line_no, e.to_string()))?;
                if !f.is_closed() {
                    return Err(err(line_no, format!("constraint `{f}` has free variables")));
                }
                constraints.push(f);
            }
        }
    }

    let line_count = text.lines().count().max(1);
    let lang = match lang {
        Some(l) => l,
        None => {
            let mut sig = Signature::new();
            for c in constants.unwrap_or_default() {
                sig.add_constant(&c).map_err(|e| err(line_count, e.to_string()))?;
            }
            for (p, n) in predicates.unwrap_or_default() {
                sig.add_predicate(&p, n).map_err(|e| err(line_count, e.to_string()))?;
            }
            RelationalLanguage::new(sig).map_err(|e| err(line_count, e.to_string()))?
        }
    };
    let basis = FactBasis::new(&lang, facts).map_err(|e| err(line_count, e.to_string()))?;
    RelationalDatabase::new(lang, basis, constraints).map_err(|e| err(line_count, e.to_string()))
}
