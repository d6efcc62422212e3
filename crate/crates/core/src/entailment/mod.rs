//! Deciding `Gamma |- Delta` over a relational language: quantifiers are
//! expanded over the constants, designation is reflected into signed boolean
//! variables, and a DPLL search looks for a countermodel.

mod encode;
mod ground;
pub mod solver;

pub use encode::{encode_designated, encode_falsifiable, BoolExpr, EncodeError, Side, SignedVar};
pub use ground::{ground_formula, ground_instances, GroundError};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use crate::relational::GroundAtom;
use crate::relational::RelationalLanguage;
use crate::semantics::{index_tuple, TruthValue};
use crate::syntax::{free_variables_of, substitute, Formula, Term};
use encode::encode_with;
use solver::{normalize_clause, solve, Clause, Lit};

/// Which consequence relation to decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    /// Three values; `Both` allowed.
    Paraconsistent,
    /// Two values; every atom is True or False.
    Classical,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Paraconsistent => "lp",
            Mode::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntailmentError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("atom `{0}` is not an atomic fact of the language")]
    UnknownAtom(GroundAtom),
}

/// Atom values refuting a sequent, plus the constants chosen for its free variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub substitution: Vec<(String, String)>,
    /// Values of the atoms mentioned by the sequent, in language order.
    pub values: Vec<(GroundAtom, TruthValue)>,
}

impl Countermodel {
    pub fn value(&self, atom: &GroundAtom) -> Option<TruthValue> {
        self.values.iter().find(|(a, _)| a == atom).map(|&(_, v)| v)
    }
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, c) in &self.substitution {
            writeln!(f, "{x} := {c}")?;
        }
        for (atom, v) in &self.values {
            writeln!(f, "{atom}={v}")?;
        }
        Ok(())
    }
}

fn t_var(atom: usize) -> usize {
    2 * atom
}

fn f_var(atom: usize) -> usize {
    2 * atom + 1
}

/// Turns boolean expressions into clauses, introducing one auxiliary
/// variable per nested subformula. Only the implication from the auxiliary
/// to its subformula is emitted, which preserves satisfiability.
struct ClauseBuilder {
    next_var: usize,
    clauses: Vec<Clause>,
}

impl ClauseBuilder {
    fn push(&mut self, clause: Clause) {
        if let Some(c) = normalize_clause(clause) {
            self.clauses.push(c);
        }
    }

    fn fresh(&mut self) -> usize {
        self.next_var += 1;
        self.next_var - 1
    }

    /// Adds clauses forcing `e` (or its negation).
    fn assert(&mut self, e: &BoolExpr<usize>, negated: bool) {
        match e {
            BoolExpr::Const(b) => {
                if *b == negated {
                    self.clauses.push(Vec::new());
                }
            }
            BoolExpr::Var(v) => self.push(vec![Lit::new(*v, !negated)]),
            BoolExpr::Not(x) => self.assert(x, !negated),
            BoolExpr::And(xs) | BoolExpr::Or(xs) => {
                if matches!(e, BoolExpr::And(_)) != negated {
                    for x in xs {
                        self.assert(x, negated);
                    }
                } else {
                    let clause = xs.iter().map(|x| self.literal(x, negated)).collect();
                    self.push(clause);
                }
            }
        }
    }

    /// A literal implying `e` (or its negation).
    fn literal(&mut self, e: &BoolExpr<usize>, negated: bool) -> Lit {
        match e {
            BoolExpr::Var(v) => Lit::new(*v, !negated),
            BoolExpr::Not(x) => self.literal(x, !negated),
            BoolExpr::Const(b) => {
                let a = self.fresh();
                self.push(vec![Lit::new(a, *b != negated)]);
                Lit::new(a, true)
            }
            BoolExpr::And(xs) | BoolExpr::Or(xs) => {
                let a = Lit::new(self.fresh(), true);
                if matches!(e, BoolExpr::And(_)) != negated {
                    for x in xs {
                        let l = self.literal(x, negated);
                        self.push(vec![a.negated(), l]);
                    }
                } else {
                    let mut clause = vec![a.negated()];
                    for x in xs {
                        clause.push(self.literal(x, negated));
                    }
                    self.push(clause);
                }
                a
            }
        }
    }
}

/// A grounded, encoded premise set that answers many consequence queries.
#[derive(Clone, Debug)]
pub struct Engine<'l> {
    lang: &'l RelationalLanguage,
    mode: Mode,
    clauses: Vec<Clause>,
    num_vars: usize,
    mentioned: Vec<bool>,
    satisfiable: bool,
}

fn encode_ids(
    formula: &Formula,
    designated: bool,
    lang: &RelationalLanguage,
    mentioned: &mut [bool],
) -> Result<BoolExpr<usize>, EntailmentError> {
    encode_with(formula, designated, &mut |atom: &GroundAtom, side| {
        let id = lang.atom_id(atom).ok_or_else(|| EntailmentError::UnknownAtom(atom.clone()))?;
        mentioned[id] = true;
        Ok(match side {
            Side::T => t_var(id),
            Side::F => f_var(id),
        })
    })
}

fn atom_clauses(mode: Mode, id: usize, out: &mut ClauseBuilder) {
    out.push(vec![Lit::new(t_var(id), true), Lit::new(f_var(id), true)]);
    if mode == Mode::Classical {
        out.push(vec![Lit::new(t_var(id), false), Lit::new(f_var(id), false)]);
    }
}

impl<'l> Engine<'l> {
    /// Grounds and encodes closed premises.
    pub fn new(lang: &'l RelationalLanguage, premises: &[Formula], mode: Mode) -> Result<Engine<'l>, EntailmentError> {
        let mut mentioned = vec![false; lang.atom_count()];
        let mut builder = ClauseBuilder { next_var: 2 * lang.atom_count(), clauses: Vec::new() };
        for premise in premises {
            for (_, instance) in ground_instances(premise, lang)? {
                let d = encode_ids(&instance, true, lang, &mut mentioned)?;
                builder.assert(&d, false);
            }
        }
        for (id, _) in mentioned.iter().enumerate().filter(|(_, m)| **m) {
            atom_clauses(mode, id, &mut builder);
        }
        let satisfiable = solve(builder.next_var, builder.clauses.iter().cloned()).is_some();
        Ok(Engine { lang, mode, clauses: builder.clauses, num_vars: builder.next_var, mentioned, satisfiable })
    }

    pub fn language(&self) -> &'l RelationalLanguage {
        self.lang
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Whether some valuation designates every premise.
    pub fn is_satisfiable(&self) -> bool {
        self.satisfiable
    }

    /// Whether every valuation designating the premises designates some conclusion.
    pub fn entails(&self, conclusions: &[Formula]) -> Result<bool, EntailmentError> {
        Ok(self.countermodel(conclusions)?.is_none())
    }

    pub fn countermodel(&self, conclusions: &[Formula]) -> Result<Option<Vec<(GroundAtom, TruthValue)>>, EntailmentError> {
        let mut mentioned = self.mentioned.clone();
        let mut builder = ClauseBuilder { next_var: self.num_vars, clauses: Vec::new() };
        for c in conclusions {
            let ground = ground_formula(c, self.lang)?;
            let d = encode_ids(&ground, true, self.lang, &mut mentioned)?;
            builder.assert(&d, true);
        }
        if !self.satisfiable {
            return Ok(None);
        }
        for id in 0..mentioned.len() {
            if mentioned[id] && !self.mentioned[id] {
                atom_clauses(self.mode, id, &mut builder);
            }
        }
        let model = solve(builder.next_var, self.clauses.iter().cloned().chain(builder.clauses));
        Ok(model.map(|m| {
            mentioned
                .iter()
                .enumerate()
                .filter(|(_, used)| **used)
                .map(|(id, _)| {
                    let v = match (m[t_var(id)], m[f_var(id)]) {
                        (true, true) => TruthValue::Both,
                        (true, false) => TruthValue::True,
                        _ => TruthValue::False,
                    };
                    (self.lang.atom(id), v)
                })
                .collect()
        }))
    }
}

fn substitutions<'a>(vars: &'a BTreeSet<String>, lang: &'a RelationalLanguage) -> impl Iterator<Item = Vec<(String, String)>> + 'a {
    let n = lang.constant_count();
    let k = vars.len();
    (0..n.pow(k as u32)).map(move |code| {
        vars.iter()
            .cloned()
            .zip(index_tuple(code, k, n).into_iter().map(|i| lang.constants()[i].clone()))
            .collect()
    })
}

fn apply(formulas: &[Formula], sub: &[(String, String)]) -> Vec<Formula> {
    formulas
        .iter()
        .map(|f| {
            sub.iter()
                .fold(f.clone(), |acc, (x, c)| substitute(&acc, x, &Term::constant(c.clone())))
        })
        .collect()
}

/// The first countermodel to `gamma |- delta`, if any. Free variables range
/// over the constants, shared between both sides.
pub fn find_countermodel(
    lang: &RelationalLanguage,
    gamma: &[Formula],
    delta: &[Formula],
    mode: Mode,
) -> Result<Option<Countermodel>, EntailmentError> {
    let vars = free_variables_of(gamma.iter().chain(delta));
    let gamma_closed = free_variables_of(gamma).is_empty();
    let shared = if gamma_closed { Some(Engine::new(lang, gamma, mode)?) } else { None };
    for sub in substitutions(&vars, lang) {
        let local;
        let engine = match &shared {
            Some(e) => e,
            None => {
                local = Engine::new(lang, &apply(gamma, &sub), mode)?;
                &local
            }
        };
        if let Some(values) = engine.countermodel(&apply(delta, &sub))? {
            return Ok(Some(Countermodel { substitution: sub, values }));
        }
    }
    Ok(None)
}

pub fn decide_consequence(
    lang: &RelationalLanguage,
    gamma: &[Formula],
    delta: &[Formula],
    mode: Mode,
) -> Result<bool, EntailmentError> {
    Ok(find_countermodel(lang, gamma, delta, mode)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn lang() -> RelationalLanguage {
        RelationalLanguage::from_parts(["a", "b"], [("P", 1), ("Q", 1)]).unwrap()
    }

    fn parse_all(lang: &RelationalLanguage, items: &[&str]) -> Vec<Formula> {
        items.iter().map(|t| parse_formula(t, lang.signature()).unwrap()).collect()
    }

    #[test]
    fn explosion_only_in_classical_mode() {
        let lang = lang();
        let gamma = parse_all(&lang, &["P(a)", "~P(a)"]);
        let delta = parse_all(&lang, &["Q(b)"]);
        assert!(decide_consequence(&lang, &gamma, &delta, Mode::Classical).unwrap());
        let cm = find_countermodel(&lang, &gamma, &delta, Mode::Paraconsistent).unwrap().unwrap();
        assert_eq!(cm.value(&GroundAtom::new("P", ["a"])), Some(TruthValue::Both));
        assert_eq!(cm.value(&GroundAtom::new("Q", ["b"])), Some(TruthValue::False));
    }

    #[test]
    fn free_variables_range_over_constants() {
        let lang = lang();
        let gamma = parse_all(&lang, &["forall x. P(x)"]);
        assert!(decide_consequence(&lang, &gamma, &parse_all(&lang, &["P(y)"]), Mode::Paraconsistent).unwrap());
        let cm = find_countermodel(&lang, &parse_all(&lang, &["P(a)"]), &parse_all(&lang, &["P(y)"]), Mode::Paraconsistent)
            .unwrap()
            .unwrap();
        assert_eq!(cm.substitution, vec![("y".to_string(), "b".to_string())]);
    }

    #[test]
    fn weak_implication_detaches() {
        let lang = lang();
        let gamma = parse_all(&lang, &["P(a)", "P(a) -> Q(a)"]);
        assert!(decide_consequence(&lang, &gamma, &parse_all(&lang, &["Q(a)"]), Mode::Paraconsistent).unwrap());
        // Excluded middle holds, disjunctive syllogism does not.
        assert!(decide_consequence(&lang, &[], &parse_all(&lang, &["P(a) | ~P(a)"]), Mode::Paraconsistent).unwrap());
        let gamma = parse_all(&lang, &["P(a) | Q(a)", "~P(a)"]);
        assert!(!decide_consequence(&lang, &gamma, &parse_all(&lang, &["Q(a)"]), Mode::Paraconsistent).unwrap());
    }

    #[test]
    fn empty_succedent_means_unsatisfiable() {
        let lang = lang();
        assert!(decide_consequence(&lang, &[Formula::Falsum], &[], Mode::Paraconsistent).unwrap());
        assert!(!decide_consequence(&lang, &parse_all(&lang, &["P(a)", "~P(a)"]), &[], Mode::Paraconsistent).unwrap());
    }
}
