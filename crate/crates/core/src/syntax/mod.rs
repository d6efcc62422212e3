//! Object language: signatures, terms, formulas, free variables, capture-avoiding
//! substitution and expansion of the derived connectives.

mod parse;
mod print;
mod signature;
mod subst;

pub use parse::{parse_formula, parse_formula_list, parse_sequent_parts, parse_term, ParseError, ParseErrorKind};
pub use signature::{Signature, SignatureError, Symbol};
pub use subst::{fresh_variable, substitute, substitute_term};

use std::collections::BTreeSet;

/// Names reserved by the formula grammar.
pub const RESERVED_WORDS: &[&str] = &["bot", "top", "cons", "forall", "exists"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn has_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.has_var(name)),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }
}

/// A formula, including the derived forms `top`, `cons(A)` and `A => B`.
///
/// The derived forms are kept in the tree as written and removed by
/// [`Formula::expand_sugar`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Falsum,
    Prop(String),
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// `top`, standing for `~bot`.
    Top,
    /// `cons(A)`, standing for `(A -> bot) | (~A -> bot)`.
    Cons(Box<Formula>),
    /// `A => B`, standing for `(A -> B) & (~B -> ~A)`.
    StrongImplies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn strong_implies(self, rhs: Formula) -> Formula {
        Formula::StrongImplies(Box::new(self), Box::new(rhs))
    }

    pub fn cons(self) -> Formula {
        Formula::Cons(Box::new(self))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Nested universal quantification, outermost variable first.
    pub fn forall_many<I, S>(vars: I, body: Formula) -> Formula
    where
        I: IntoIterator<Item = S>,
        I::IntoIter: DoubleEndedIterator,
        S: Into<String>,
    {
        vars.into_iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    /// Left-nested conjunction; `top` for an empty sequence.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `bot` for an empty sequence.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Falsum)
    }

    /// Atomic formulas: `bot`, propositions, predicate applications, equations.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Falsum | Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..))
    }

    /// Atomic formulas under any number of negations.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_literal(),
            other => other.is_atomic(),
        }
    }

    pub fn is_sugar_free(&self) -> bool {
        match self {
            Formula::Top | Formula::Cons(_) | Formula::StrongImplies(..) => false,
            Formula::Falsum | Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => true,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.is_sugar_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_sugar_free() && b.is_sugar_free()
            }
        }
    }

    /// Replaces every derived form by its definition, recursively.
    pub fn expand_sugar(&self) -> Formula {
        match self {
            Formula::Top => Formula::Falsum.negate(),
            Formula::Cons(a) => {
                let a = a.expand_sugar();
                a.clone()
                    .implies(Formula::Falsum)
                    .or(a.negate().implies(Formula::Falsum))
            }
            Formula::StrongImplies(a, b) => {
                let a = a.expand_sugar();
                let b = b.expand_sugar();
                a.clone().implies(b.clone()).and(b.negate().implies(a.negate()))
            }
            Formula::Falsum | Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => a.expand_sugar().negate(),
            Formula::And(a, b) => a.expand_sugar().and(b.expand_sugar()),
            Formula::Or(a, b) => a.expand_sugar().or(b.expand_sugar()),
            Formula::Implies(a, b) => a.expand_sugar().implies(b.expand_sugar()),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.expand_sugar()),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.expand_sugar()),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let term_vars = |t: &Term, bound: &Vec<&'a str>, out: &mut BTreeSet<String>| {
            for v in t.free_variables() {
                if !bound.contains(&v.as_str()) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Falsum | Formula::Top | Formula::Prop(_) => {}
            Formula::Pred(_, args) => args.iter().for_each(|t| term_vars(t, bound, out)),
            Formula::Eq(l, r) => {
                term_vars(l, bound, out);
                term_vars(r, bound, out);
            }
            Formula::Not(a) | Formula::Cons(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::StrongImplies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free_var(&self, name: &str) -> bool {
        match self {
            Formula::Falsum | Formula::Top | Formula::Prop(_) => false,
            Formula::Pred(_, args) => args.iter().any(|t| t.has_var(name)),
            Formula::Eq(l, r) => l.has_var(name) || r.has_var(name),
            Formula::Not(a) | Formula::Cons(a) => a.has_free_var(name),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::StrongImplies(a, b) => {
                a.has_free_var(name) || b.has_free_var(name)
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => v != name && a.has_free_var(name),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Number of connective and quantifier layers above the atoms.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Falsum | Formula::Top | Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => 0,
            Formula::Not(a) | Formula::Cons(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::StrongImplies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

/// Free variables of a set of formulas.
pub fn free_variables_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<String> {
    formulas.into_iter().flat_map(Formula::free_variables).collect()
}
