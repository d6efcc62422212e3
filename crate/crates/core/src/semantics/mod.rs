//! Three-valued structures, assignments and the valuation of formulas, plus
//! an exhaustive consequence oracle over small relational languages.

mod oracle;
mod structure;
mod tables;
mod value;

pub use oracle::{consequence_bruteforce, find_countermodel_bruteforce, OracleError, ORACLE_MAX_ATOMS, ORACLE_MAX_ASSIGNMENTS};
pub use structure::{index_tuple, Assignment, Structure, StructureError, Table};
pub use tables::{render_truth_tables, Connective};
pub use value::TruthValue;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{free_variables_of, Formula, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("symbol `{0}` is not interpreted in the structure")]
    Undeclared(String),
    #[error("assignment refers to elements outside the domain")]
    BadAssignment,
}

/// Truth value of `formula` in `st` under `asg`. Derived forms are valued by
/// their definitions.
pub fn eval_formula(st: &Structure, asg: &Assignment, formula: &Formula) -> Result<TruthValue, EvalError> {
    if !asg.fits(st) {
        return Err(EvalError::BadAssignment);
    }
    Evaluator { st, asg, scope: Vec::new() }.formula(formula)
}

pub fn eval_term(st: &Structure, asg: &Assignment, term: &Term) -> Result<usize, EvalError> {
    if !asg.fits(st) {
        return Err(EvalError::BadAssignment);
    }
    Evaluator { st, asg, scope: Vec::new() }.term(term)
}

struct Evaluator<'a> {
    st: &'a Structure,
    asg: &'a Assignment,
    scope: Vec<(&'a str, usize)>,
}

impl<'a> Evaluator<'a> {
    fn lookup(&self, var: &str) -> usize {
        self.scope
            .iter()
            .rev()
            .find(|(v, _)| *v == var)
            .map_or_else(|| self.asg.get(var), |&(_, e)| e)
    }

    fn term(&self, term: &Term) -> Result<usize, EvalError> {
        match term {
            Term::Var(v) => Ok(self.lookup(v)),
            Term::Const(c) => self.st.constant(c).ok_or_else(|| EvalError::Undeclared(c.clone())),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.st.function(f, &vals).ok_or_else(|| EvalError::Undeclared(f.clone()))
            }
        }
    }

    fn formula(&mut self, formula: &'a Formula) -> Result<TruthValue, EvalError> {
        use TruthValue::*;
        Ok(match formula {
            Formula::Falsum => False,
            Formula::Top => True,
            Formula::Prop(p) => self.st.proposition(p).ok_or_else(|| EvalError::Undeclared(p.clone()))?,
            Formula::Pred(p, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                if !self.st.interprets(p, Symbol::Predicate(args.len())) {
                    return Err(EvalError::Undeclared(p.clone()));
                }
                self.st.predicate(p, &vals).ok_or_else(|| EvalError::Undeclared(p.clone()))?
            }
            Formula::Eq(l, r) => {
                let (l, r) = (self.term(l)?, self.term(r)?);
                self.st.equality(l, r)
            }
            Formula::Not(a) => self.formula(a)?.neg(),
            Formula::And(a, b) => self.formula(a)?.and(self.formula(b)?),
            Formula::Or(a, b) => self.formula(a)?.or(self.formula(b)?),
            Formula::Implies(a, b) => self.formula(a)?.implies(self.formula(b)?),
            Formula::Cons(a) => cons_value(self.formula(a)?),
            Formula::StrongImplies(a, b) => strong_implies_value(self.formula(a)?, self.formula(b)?),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(formula, Formula::Forall(..));
                let mut acc = if universal { True } else { False };
                for d in 0..self.st.size() {
                    self.scope.push((v, d));
                    let val = self.formula(body);
                    self.scope.pop();
                    let val = val?;
                    acc = if universal { acc.and(val) } else { acc.or(val) };
                }
                acc
            }
        })
    }
}

/// Value of `cons(A)` given the value of `A`, computed through its definition.
pub fn cons_value(a: TruthValue) -> TruthValue {
    a.implies(TruthValue::False).or(a.neg().implies(TruthValue::False))
}

/// Value of `A => B`, computed through its definition.
pub fn strong_implies_value(a: TruthValue, b: TruthValue) -> TruthValue {
    a.implies(b).and(b.neg().implies(a.neg()))
}

/// Every assignment of domain elements to `vars`, in lexicographic order.
pub fn assignments_over(vars: &BTreeSet<String>, size: usize) -> impl Iterator<Item = Assignment> + '_ {
    let k = vars.len() as u32;
    (0..size.pow(k)).map(move |i| {
        let tuple = index_tuple(i, vars.len(), size);
        Assignment::from_pairs(0, vars.iter().map(String::as_str).zip(tuple))
    })
}

/// Whether every formula of `gamma` is designated under every assignment.
pub fn is_model(st: &Structure, gamma: &[Formula]) -> Result<bool, EvalError> {
    let vars = free_variables_of(gamma);
    for asg in assignments_over(&vars, st.size()) {
        for f in gamma {
            if !eval_formula(st, &asg, f)?.is_designated() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
