//! Queries over relational databases and three notions of answer: plain
//! answers, consistent answers drawn from a set of clean semi-atomic facts,
//! and strongly consistent answers that hold in every repair.

mod repair;

pub use repair::{
    classically_consistent, leq_lambda, repairs, strongly_consistent_answers, RepairOptions, RepairOutcome, RepairSet,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::entailment::{ground_formula, EntailmentError, Engine, Mode};
use crate::relational::{
    canonical_model, falsified_instances, rsa, semi_atoms, FactBasis, RelationalDatabase, RelationalError,
    RelationalLanguage, SemiAtomicFact,
};
use crate::semantics::index_tuple;
use crate::syntax::{parse_formula, substitute, Formula, ParseError, Signature, Term};

/// A tuple of constant names, one per head variable.
pub type Tuple = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query must have the form `x, y | FORMULA`")]
    MissingBar,
    #[error("`{0}` is not a variable name")]
    BadVariable(String),
    #[error("head variable `{0}` is repeated")]
    DuplicateHead(String),
    #[error("variable `{0}` is free in the body but not in the head")]
    Unbound(String),
    #[error("query body: {0}")]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CqaError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("query is not applicable to the database: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    Relational(#[from] RelationalError),
    #[error(transparent)]
    Entailment(#[from] EntailmentError),
    #[error("no consistent fact basis within {max_diff} changes ({examined} candidates examined)")]
    BoundExhausted { max_diff: usize, examined: usize },
    #[error("repairs with more than {max_diff} changes may exist; raise the bound")]
    IncompleteRepairs { max_diff: usize },
}

/// `x1,...,xn | A` with every free variable of `A` among the `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub head: Vec<String>,
    pub body: Formula,
}

fn is_variable_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Index of the first `|` that is not the start of `|-`.
fn head_bar(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    (0..bytes.len()).find(|&i| bytes[i] == b'|' && bytes.get(i + 1) != Some(&b'-'))
}

impl Query {
    pub fn new(head: Vec<String>, body: Formula) -> Result<Query, QueryError> {
        let mut seen = BTreeSet::new();
        for v in &head {
            if !is_variable_name(v) {
                return Err(QueryError::BadVariable(v.clone()));
            }
            if !seen.insert(v.as_str()) {
                return Err(QueryError::DuplicateHead(v.clone()));
            }
        }
        if let Some(v) = body.free_variables().into_iter().find(|v| !seen.contains(v.as_str())) {
            return Err(QueryError::Unbound(v));
        }
        Ok(Query { head, body })
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Query, QueryError> {
        let bar = head_bar(text).ok_or(QueryError::MissingBar)?;
        let head = text[..bar]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        let body = parse_formula(text[bar + 1..].trim(), sig)?;
        Query::new(head, body)
    }

    /// The body with the head variables replaced by `tuple`, sugar expanded.
    pub fn instance(&self, tuple: &[String]) -> Formula {
        self.head
            .iter()
            .zip(tuple)
            .fold(self.body.expand_sugar(), |acc, (x, c)| substitute(&acc, x, &Term::constant(c.clone())))
    }

    /// Every tuple over the constants, in declaration order.
    pub fn candidate_tuples(&self, lang: &RelationalLanguage) -> impl Iterator<Item = Tuple> + '_ {
        let n = lang.constant_count();
        let k = self.head.len();
        let consts = lang.constants().to_vec();
        (0..n.pow(k as u32)).map(move |code| index_tuple(code, k, n).into_iter().map(|i| consts[i].clone()).collect())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.head.is_empty() {
            write!(f, "| {}", self.body)
        } else {
            write!(f, "{} | {}", self.head.join(", "), self.body)
        }
    }
}

pub fn format_tuple(t: &[String]) -> String {
    format!("({})", t.join(","))
}

fn check_applicable(lang: &RelationalLanguage, q: &Query) -> Result<(), CqaError> {
    let probe: Tuple = vec![lang.constants()[0].clone(); q.head.len()];
    ground_formula(&q.instance(&probe), lang).map_err(|e| CqaError::Inapplicable(e.to_string()))?;
    Ok(())
}

/// Tuples whose instance of the body follows from `premises`.
pub(crate) fn answers_from(lang: &RelationalLanguage, premises: &[Formula], q: &Query) -> Result<Vec<Tuple>, CqaError> {
    check_applicable(lang, q)?;
    let engine = Engine::new(lang, premises, Mode::Paraconsistent)?;
    let mut out = Vec::new();
    for t in q.candidate_tuples(lang) {
        if engine.entails(&[q.instance(&t)])? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Tuples for which the relational theory entails the instantiated body.
pub fn answers(db: &RelationalDatabase, q: &Query) -> Result<Vec<Tuple>, CqaError> {
    answers_from(&db.language, &db.theory(), q)
}

/// Semi-atomic facts `A` with `RT |- A` and `RT, constraints |- cons(A)`.
pub fn clean_facts_literal(db: &RelationalDatabase) -> Result<Vec<SemiAtomicFact>, CqaError> {
    let lang = &db.language;
    let theory = db.theory();
    let plain = Engine::new(lang, &theory, Mode::Paraconsistent)?;
    let mut full_premises = theory;
    full_premises.extend(db.expanded_constraints());
    let full = Engine::new(lang, &full_premises, Mode::Paraconsistent)?;
    let mut out = Vec::new();
    for fact in semi_atoms(lang) {
        let f = fact.to_formula();
        if plain.entails(std::slice::from_ref(&f))? && full.entails(&[f.cons().expand_sugar()])? {
            out.push(fact);
        }
    }
    Ok(out)
}

/// The semi-atomic diagram of the canonical model, minus every basis fact
/// that occurs in a constraint instance the canonical model makes False.
pub fn clean_facts_blame(db: &RelationalDatabase) -> Result<Vec<SemiAtomicFact>, CqaError> {
    let lang = &db.language;
    let st = canonical_model(lang, &db.basis);
    let mut blamed = BTreeSet::new();
    for inst in falsified_instances(db, &st)? {
        for atom in inst.atoms(lang) {
            if db.basis.contains(&atom) {
                blamed.insert(atom);
            }
        }
    }
    Ok(lang
        .atoms()
        .into_iter()
        .filter(|a| !blamed.contains(a))
        .map(|a| if db.basis.contains(&a) { SemiAtomicFact::positive(a) } else { SemiAtomicFact::negative(a) })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CleanVariant {
    Literal,
    Blame,
}

impl CleanVariant {
    pub fn name(self) -> &'static str {
        match self {
            CleanVariant::Literal => "literal",
            CleanVariant::Blame => "blame",
        }
    }
}

pub fn clean_facts(db: &RelationalDatabase, variant: CleanVariant) -> Result<Vec<SemiAtomicFact>, CqaError> {
    match variant {
        CleanVariant::Literal => clean_facts_literal(db),
        CleanVariant::Blame => clean_facts_blame(db),
    }
}

/// Answers derivable from the clean facts and the structure axioms. The whole
/// clean set is used as premises; any subset proves less.
pub fn consistent_answers(db: &RelationalDatabase, q: &Query, variant: CleanVariant) -> Result<Vec<Tuple>, CqaError> {
    let clean = clean_facts(db, variant)?;
    consistent_answers_from(db, q, &clean)
}

fn consistent_answers_from(db: &RelationalDatabase, q: &Query, clean: &[SemiAtomicFact]) -> Result<Vec<Tuple>, CqaError> {
    let mut premises: Vec<Formula> = clean.iter().map(SemiAtomicFact::to_formula).collect();
    premises.extend(rsa(&db.language).iter().map(Formula::expand_sugar));
    answers_from(&db.language, &premises, q)
}

/// Whether `RT, constraints` has a three-valued model.
pub fn theory_satisfiable(db: &RelationalDatabase) -> Result<bool, CqaError> {
    let mut premises = db.theory();
    premises.extend(db.expanded_constraints());
    Ok(Engine::new(&db.language, &premises, Mode::Paraconsistent)?.is_satisfiable())
}

/// `RT(l) |- A` holds only if `RT(l), constraints |- ~A` does not, for every
/// semi-atomic `A`, with `|-` decided in `mode`.
pub fn consistent_with(
    lang: &RelationalLanguage,
    l: &FactBasis,
    constraints: &[Formula],
    mode: Mode,
) -> Result<bool, CqaError> {
    let theory = crate::relational::relational_theory(lang, l);
    let plain = Engine::new(lang, &theory, mode)?;
    let mut full_premises = theory;
    full_premises.extend(constraints.iter().map(Formula::expand_sugar));
    let full = Engine::new(lang, &full_premises, mode)?;
    for fact in semi_atoms(lang) {
        let f = fact.to_formula();
        if plain.entails(std::slice::from_ref(&f))? && full.entails(&[f.negate()])? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AnswerKind {
    Plain,
    Consistent { variant: CleanVariant },
    Strong { max_diff: usize, con_mode: Mode },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairVerdict {
    pub repair: RepairSet,
    pub answers: Vec<Tuple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    None,
    CleanSet {
        #[serde(serialize_with = "crate::relational::serialize_displays")]
        facts: Vec<SemiAtomicFact>,
        /// Whether the theory plus constraints has a three-valued model.
        theory_satisfiable: bool,
    },
    Repairs { verdicts: Vec<RepairVerdict>, examined: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerReport {
    pub query: String,
    pub head: Vec<String>,
    #[serde(flatten)]
    pub kind: AnswerKind,
    pub answers: Vec<Tuple>,
    pub evidence: Evidence,
}

pub fn answer_report(db: &RelationalDatabase, q: &Query, kind: AnswerKind) -> Result<AnswerReport, CqaError> {
    let (answers, evidence) = match kind {
        AnswerKind::Plain => (answers(db, q)?, Evidence::None),
        AnswerKind::Consistent { variant } => {
            let facts = clean_facts(db, variant)?;
            let found = consistent_answers_from(db, q, &facts)?;
            (found, Evidence::CleanSet { facts, theory_satisfiable: theory_satisfiable(db)? })
        }
        AnswerKind::Strong { max_diff, con_mode } => {
            let options = RepairOptions { max_diff, con_mode, ..RepairOptions::default() };
            let outcome = repairs(db, &options)?;
            if !outcome.exhaustive {
                return Err(CqaError::IncompleteRepairs { max_diff });
            }
            let mut verdicts = Vec::new();
            for r in &outcome.repairs {
                verdicts.push(RepairVerdict { repair: r.clone(), answers: answers(&db.with_basis(r.basis.clone()), q)? });
            }
            let found = intersect(verdicts.iter().map(|v| &v.answers));
            (found, Evidence::Repairs { verdicts, examined: outcome.examined })
        }
    };
    Ok(AnswerReport { query: q.to_string(), head: q.head.clone(), kind, answers, evidence })
}

pub(crate) fn intersect<'a>(mut sets: impl Iterator<Item = &'a Vec<Tuple>>) -> Vec<Tuple> {
    let Some(first) = sets.next() else { return Vec::new() };
    let mut out = first.clone();
    for s in sets {
        out.retain(|t| s.contains(t));
    }
    out
}
