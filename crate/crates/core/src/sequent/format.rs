//! Line-oriented proof files.
//!
//! ```text
//! # comment
//! constants: a, b
//! predicates: P/1, Q/2
//! mode: lp
//! 1 | P(a) |- P(a) | I | PREMISES= | PRINCIPAL=P(a)
//! 2 | P(a) |- P(a) | Q(b) | or-R | PREMISES=1 | PRINCIPAL=P(a) | Q(b)
//! ```
//!
//! Header keys are `constants`, `functions`, `propositions`, `predicates`
//! (both with `name/arity`) and `mode` (`lp` or `classical`). The rule `HYP`
//! marks a hypothesis. Since formulas may contain `|`, a line is split on the
//! bars that are not part of `|-` and the rule is the first chunk after the
//! sequent that names a rule and is followed by a field or the line end.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Derivation, Instantiation, Justification, RuleName, Sequent, Step};
use crate::entailment::Mode;
use crate::syntax::{parse_formula, parse_term, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofFileError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub signature: Signature,
    pub derivation: Derivation,
}

const HYP: &str = "HYP";

fn split_bars(line: &str) -> Vec<&str> {
    let bytes = line.as_bytes();
    let mut chunks = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'|' && bytes.get(i + 1) != Some(&b'-') {
            chunks.push(&line[start..i]);
            start = i + 1;
        }
    }
    chunks.push(&line[start..]);
    chunks
}

fn is_field(chunk: &str) -> bool {
    let c = chunk.trim_start();
    c.starts_with("PREMISES=") || c.starts_with("PRINCIPAL=") || c.starts_with("WITNESS=")
}

fn is_rule(chunk: &str) -> bool {
    let c = chunk.trim();
    c == HYP || c.parse::<RuleName>().is_ok()
}

fn parse_arity_list(value: &str) -> Result<Vec<(String, usize)>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, arity) = item.split_once('/').ok_or_else(|| format!("expected name/arity, got `{item}`"))?;
            let arity = arity.trim().parse().map_err(|_| format!("bad arity in `{item}`"))?;
            Ok((name.trim().to_string(), arity))
        })
        .collect()
}

fn names(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn parse_proof_file(text: &str) -> Result<ProofFile, ProofFileError> {
    let mut signature = Signature::new();
    let mut mode = Mode::Paraconsistent;
    let mut steps: Vec<Step> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| ProofFileError { line: line_no, message };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if steps.is_empty() && !line.starts_with(|c: char| c.is_ascii_digit()) {
            let (key, value) = line.split_once(':').ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
            let result = match key.trim() {
                "constants" => names(value).try_for_each(|c| signature.add_constant(c)).map_err(|e| e.to_string()),
                "propositions" => names(value).try_for_each(|p| signature.add_proposition(p)).map_err(|e| e.to_string()),
                "functions" => parse_arity_list(value).and_then(|fs| {
                    fs.iter().try_for_each(|(f, k)| signature.add_function(f, *k)).map_err(|e| e.to_string())
                }),
                "predicates" => parse_arity_list(value).and_then(|ps| {
                    ps.iter().try_for_each(|(p, k)| signature.add_predicate(p, *k)).map_err(|e| e.to_string())
                }),
                "mode" => match value.trim() {
                    "lp" => Ok(Mode::Paraconsistent),
                    "classical" => Ok(Mode::Classical),
                    other => Err(format!("unknown mode `{other}`")),
                }
                .map(|m| mode = m),
                other => Err(format!("unknown header key `{other}`")),
            };
            result.map_err(err)?;
            continue;
        }
        steps.push(parse_step(line, &signature, steps.len() + 1).map_err(err)?);
    }
    if steps.is_empty() {
        return Err(ProofFileError { line: text.lines().count(), message: "no proof steps".into() });
    }
    Ok(ProofFile { signature, derivation: Derivation { steps, mode } })
}

fn parse_step(line: &str, sig: &Signature, expected_index: usize) -> Result<Step, String> {
    let chunks = split_bars(line);
    let index: usize = chunks[0].trim().parse().map_err(|_| format!("bad step index `{}`", chunks[0].trim()))?;
    if index != expected_index {
        return Err(format!("expected step {expected_index}, found {index}"));
    }
    let rule_at = (2..chunks.len())
        .find(|&k| is_rule(chunks[k]) && (k + 1 == chunks.len() || is_field(chunks[k + 1])))
        .ok_or("missing rule name")?;
    let sequent_text = chunks[1..rule_at].join("|");
    let sequent = Sequent::parse(sequent_text.trim(), sig).map_err(|e| format!("sequent: {e}"))?;
    let rule_text = chunks[rule_at].trim();

    let mut premises = Vec::new();
    let mut principal = None;
    let mut witness = None;
    let rest = &chunks[rule_at + 1..];
    let witness_at = rest.iter().rposition(|c| c.trim_start().starts_with("WITNESS="));
    let mut k = 0;
    while k < rest.len() {
        let chunk = rest[k].trim();
        if let Some(list) = chunk.strip_prefix("PREMISES=") {
            for item in names(list) {
                let p: usize = item.parse().map_err(|_| format!("bad premise `{item}`"))?;
                if p == 0 {
                    return Err("premise indices start at 1".into());
                }
                premises.push(p - 1);
            }
            k += 1;
        } else if let Some(first) = chunk.strip_prefix("PRINCIPAL=") {
            let end = witness_at.filter(|&w| w > k).unwrap_or(rest.len());
            let mut text = first.to_string();
            for more in &rest[k + 1..end] {
                text.push('|');
                text.push_str(more);
            }
            principal = Some(parse_formula(text.trim(), sig).map_err(|e| format!("principal: {e}"))?);
            k = end;
        } else if let Some(t) = chunk.strip_prefix("WITNESS=") {
            witness = Some(parse_term(t.trim(), sig).map_err(|e| format!("witness: {e}"))?);
            k += 1;
        } else {
            return Err(format!("unexpected field `{chunk}`"));
        }
    }

    let justification = if rule_text == HYP {
        if !premises.is_empty() || principal.is_some() || witness.is_some() {
            return Err("a hypothesis takes no fields".into());
        }
        Justification::Hypothesis
    } else {
        let rule = rule_text.parse::<RuleName>().map_err(|_| format!("unknown rule `{rule_text}`"))?;
        Justification::Rule { rule, premises, inst: Instantiation { principal, witness } }
    };
    Ok(Step { sequent, justification })
}

impl ProofFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sig = &self.signature;
        let consts: Vec<&str> = sig.constants().collect();
        if !consts.is_empty() {
            let _ = writeln!(out, "constants: {}", consts.join(", "));
        }
        let funcs: Vec<String> = sig.functions().map(|(f, k)| format!("{f}/{k}")).collect();
        if !funcs.is_empty() {
            let _ = writeln!(out, "functions: {}", funcs.join(", "));
        }
        let props: Vec<&str> = sig.propositions().collect();
        if !props.is_empty() {
            let _ = writeln!(out, "propositions: {}", props.join(", "));
        }
        let preds: Vec<String> = sig.predicates().map(|(p, k)| format!("{p}/{k}")).collect();
        if !preds.is_empty() {
            let _ = writeln!(out, "predicates: {}", preds.join(", "));
        }
        let _ = writeln!(out, "mode: {}", self.derivation.mode.name());
        for (i, step) in self.derivation.steps.iter().enumerate() {
            let _ = write!(out, "{} | {} | ", i + 1, step.sequent);
            match &step.justification {
                Justification::Hypothesis => out.push_str(HYP),
                Justification::Rule { rule, premises, inst } => {
                    let list: Vec<String> = premises.iter().map(|p| (p + 1).to_string()).collect();
                    let _ = write!(out, "{} | PREMISES={}", rule.ascii(), list.join(","));
                    if let Some(p) = &inst.principal {
                        let _ = write!(out, " | PRINCIPAL={p}");
                    }
                    if let Some(t) = &inst.witness {
                        let _ = write!(out, " | WITNESS={t}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}
