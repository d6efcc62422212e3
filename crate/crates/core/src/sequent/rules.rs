use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Instantiation, RuleName, Sequent};
use crate::entailment::Mode;
use crate::syntax::{substitute, Formula, Term};

/// Where an eigenvariable was found free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenPlace {
    Antecedent,
    Succedent,
    Body,
}

impl fmt::Display for EigenPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigenPlace::Antecedent => "Γ",
            EigenPlace::Succedent => "Δ",
            EigenPlace::Body => "A",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("restriction violated: A must be a literal (`{0}` is not)")]
    NotLiteral(Formula),
    #[error("restriction violated: A must be an atomic formula (`{0}` is not)")]
    NotAtomic(Formula),
    #[error("eigenvariable restriction violated: `{var}` is free in {place}")]
    Eigenvariable { var: String, place: EigenPlace },
    #[error("classical-only rule not-L used in a paraconsistent derivation")]
    ClassicalOnly,
    #[error("{rule} takes {expected} premise(s), got {found}")]
    PremiseCount { rule: RuleName, expected: usize, found: usize },
    #[error("{0} needs a principal formula")]
    MissingPrincipal(RuleName),
    #[error("{0} needs a witness term")]
    MissingWitness(RuleName),
    #[error("eigenvariable must be a variable, got `{0}`")]
    WitnessNotVariable(Term),
    #[error("`{formula}` does not have the form required by {rule}")]
    Shape { rule: RuleName, formula: Formula },
    #[error("principal formula `{0}` is not in the conclusion")]
    PrincipalAbsent(Formula),
    #[error("premise {premise} lacks `{formula}`")]
    PremiseMismatch { premise: usize, formula: Formula },
    #[error("context formula `{formula}` missing from {location}")]
    Context { formula: Formula, location: String },
    #[error("no literal in the premise and conclusion is related by replacing `{rhs}` with `{lhs}`")]
    NoReplacement { lhs: Term, rhs: Term },
}

/// The formulas a rule instance acts on. Whatever is not listed here is
/// context and must be shared between conclusion and premises.
struct Shape {
    conclusion: (Vec<Formula>, Vec<Formula>),
    premises: Vec<(Vec<Formula>, Vec<Formula>)>,
    eigen: Option<Eigen>,
}

struct Eigen {
    var: String,
    bound: String,
    body: Formula,
}

fn left(principal: &Formula, premises: Vec<Vec<Formula>>) -> Shape {
    Shape {
        conclusion: (vec![principal.clone()], vec![]),
        premises: premises.into_iter().map(|p| (p, vec![])).collect(),
        eigen: None,
    }
}

fn right(principal: &Formula, premises: Vec<Vec<Formula>>) -> Shape {
    Shape {
        conclusion: (vec![], vec![principal.clone()]),
        premises: premises.into_iter().map(|p| (vec![], p)).collect(),
        eigen: None,
    }
}

fn not(f: &Formula) -> Formula {
    f.clone().negate()
}

fn eigenvariable(rule: RuleName, inst: &Instantiation) -> Result<String, Violation> {
    match &inst.witness {
        None => Err(Violation::MissingWitness(rule)),
        Some(Term::Var(y)) => Ok(y.clone()),
        Some(t) => Err(Violation::WitnessNotVariable(t.clone())),
    }
}

fn witness(rule: RuleName, inst: &Instantiation) -> Result<Term, Violation> {
    inst.witness.clone().ok_or(Violation::MissingWitness(rule))
}

/// Checks that `conclusion` follows from `premises` by one application of
/// `rule`, including every side condition.
pub fn validate_rule_instance(
    conclusion: &Sequent,
    rule: RuleName,
    premises: &[Sequent],
    inst: &Instantiation,
    mode: Mode,
) -> Result<(), Violation> {
    use RuleName::*;
    if rule == NotL && mode != Mode::Classical {
        return Err(Violation::ClassicalOnly);
    }
    if rule == EqRepl {
        return validate_replacement(conclusion, premises, inst);
    }
    let shape_err = |f: &Formula| Violation::Shape { rule, formula: f.clone() };
    let principal = match (rule, &inst.principal) {
        (BotL, None) => Formula::Falsum,
        (NotBotR, None) => Formula::Falsum.negate(),
        (EqRefl, p) => {
            let t = match (&inst.witness, p) {
                (Some(t), _) => t.clone(),
                (None, Some(Formula::Eq(l, r))) if l == r => l.clone(),
                (None, Some(other)) => return Err(shape_err(other)),
                (None, None) => return Err(Violation::MissingWitness(rule)),
            };
            let eq = Formula::eq(t.clone(), t);
            if let Some(p) = p {
                if *p != eq {
                    return Err(shape_err(p));
                }
            }
            eq
        }
        (_, Some(p)) => p.clone(),
        (_, None) => return Err(Violation::MissingPrincipal(rule)),
    };

    let shape = match (rule, &principal) {
        (Identity, a) => {
            if !a.is_literal() {
                return Err(Violation::NotLiteral(a.clone()));
            }
            Shape { conclusion: (vec![a.clone()], vec![a.clone()]), premises: vec![], eigen: None }
        }
        (BotL, Formula::Falsum) => left(&principal, vec![]),
        (NotBotR, Formula::Not(inner)) if **inner == Formula::Falsum => right(&principal, vec![]),
        (AndL, Formula::And(a, b)) => left(&principal, vec![vec![(**a).clone(), (**b).clone()]]),
        (OrL, Formula::Or(a, b)) => left(&principal, vec![vec![(**a).clone()], vec![(**b).clone()]]),
        (ImpL, Formula::Implies(a, b)) => Shape {
            conclusion: (vec![principal.clone()], vec![]),
            premises: vec![(vec![], vec![(**a).clone()]), (vec![(**b).clone()], vec![])],
            eigen: None,
        },
        (ForallL, Formula::Forall(x, a)) => {
            let t = witness(rule, inst)?;
            left(&principal, vec![vec![substitute(a, x, &t)]])
        }
        (ExistsL, Formula::Exists(x, a)) => {
            let y = eigenvariable(rule, inst)?;
            let mut s = left(&principal, vec![vec![substitute(a, x, &Term::var(y.clone()))]]);
            s.eigen = Some(Eigen { var: y, bound: x.clone(), body: (**a).clone() });
            s
        }
        (NotNotL, Formula::Not(inner)) => match &**inner {
            Formula::Not(a) => left(&principal, vec![vec![(**a).clone()]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotAndL, Formula::Not(inner)) => match &**inner {
            Formula::And(a, b) => left(&principal, vec![vec![not(a)], vec![not(b)]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotOrL, Formula::Not(inner)) => match &**inner {
            Formula::Or(a, b) => left(&principal, vec![vec![not(a), not(b)]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotImpL, Formula::Not(inner)) => match &**inner {
            Formula::Implies(a, b) => left(&principal, vec![vec![(**a).clone(), not(b)]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotForallL, Formula::Not(inner)) => match &**inner {
            Formula::Forall(x, a) => {
                let y = eigenvariable(rule, inst)?;
                let mut s = left(&principal, vec![vec![not(&substitute(a, x, &Term::var(y.clone())))]]);
                s.eigen = Some(Eigen { var: y, bound: x.clone(), body: (**a).clone() });
                s
            }
            _ => return Err(shape_err(&principal)),
        },
        (NotExistsL, Formula::Not(inner)) => match &**inner {
            Formula::Exists(x, a) => {
                let t = witness(rule, inst)?;
                left(&principal, vec![vec![not(&substitute(a, x, &t))]])
            }
            _ => return Err(shape_err(&principal)),
        },
        (EqRefl, eq) => Shape { conclusion: (vec![], vec![]), premises: vec![(vec![eq.clone()], vec![])], eigen: None },
        (NotR, Formula::Not(a)) => {
            if !a.is_atomic() {
                return Err(Violation::NotAtomic((**a).clone()));
            }
            Shape {
                conclusion: (vec![], vec![principal.clone()]),
                premises: vec![(vec![(**a).clone()], vec![])],
                eigen: None,
            }
        }
        (AndR, Formula::And(a, b)) => right(&principal, vec![vec![(**a).clone()], vec![(**b).clone()]]),
        (OrR, Formula::Or(a, b)) => right(&principal, vec![vec![(**a).clone(), (**b).clone()]]),
        (ImpR, Formula::Implies(a, b)) => Shape {
            conclusion: (vec![], vec![principal.clone()]),
            premises: vec![(vec![(**a).clone()], vec![(**b).clone()])],
            eigen: None,
        },
        (ForallR, Formula::Forall(x, a)) => {
            let y = eigenvariable(rule, inst)?;
            let mut s = right(&principal, vec![vec![substitute(a, x, &Term::var(y.clone()))]]);
            s.eigen = Some(Eigen { var: y, bound: x.clone(), body: (**a).clone() });
            s
        }
        (ExistsR, Formula::Exists(x, a)) => {
            let t = witness(rule, inst)?;
            right(&principal, vec![vec![substitute(a, x, &t)]])
        }
        (NotNotR, Formula::Not(inner)) => match &**inner {
            Formula::Not(a) => right(&principal, vec![vec![(**a).clone()]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotAndR, Formula::Not(inner)) => match &**inner {
            Formula::And(a, b) => right(&principal, vec![vec![not(a), not(b)]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotOrR, Formula::Not(inner)) => match &**inner {
            Formula::Or(a, b) => right(&principal, vec![vec![not(a)], vec![not(b)]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotImpR, Formula::Not(inner)) => match &**inner {
            Formula::Implies(a, b) => right(&principal, vec![vec![(**a).clone()], vec![not(b)]]),
            _ => return Err(shape_err(&principal)),
        },
        (NotForallR, Formula::Not(inner)) => match &**inner {
            Formula::Forall(x, a) => {
                let t = witness(rule, inst)?;
                right(&principal, vec![vec![not(&substitute(a, x, &t))]])
            }
            _ => return Err(shape_err(&principal)),
        },
        (NotExistsR, Formula::Not(inner)) => match &**inner {
            Formula::Exists(x, a) => {
                let y = eigenvariable(rule, inst)?;
                let mut s = right(&principal, vec![vec![not(&substitute(a, x, &Term::var(y.clone())))]]);
                s.eigen = Some(Eigen { var: y, bound: x.clone(), body: (**a).clone() });
                s
            }
            _ => return Err(shape_err(&principal)),
        },
        (NotL, Formula::Not(a)) => Shape {
            conclusion: (vec![principal.clone()], vec![]),
            premises: vec![(vec![], vec![(**a).clone()])],
            eigen: None,
        },
        _ => return Err(shape_err(&principal)),
    };
    check_shape(rule, conclusion, premises, &shape)
}

fn check_shape(rule: RuleName, conclusion: &Sequent, premises: &[Sequent], shape: &Shape) -> Result<(), Violation> {
    if premises.len() != shape.premises.len() {
        return Err(Violation::PremiseCount { rule, expected: shape.premises.len(), found: premises.len() });
    }
    for f in shape.conclusion.0.iter() {
        if !conclusion.antecedent.contains(f) {
            return Err(Violation::PrincipalAbsent(f.clone()));
        }
    }
    for f in shape.conclusion.1.iter() {
        if !conclusion.succedent.contains(f) {
            return Err(Violation::PrincipalAbsent(f.clone()));
        }
    }
    for (k, (p, (ant, suc))) in premises.iter().zip(&shape.premises).enumerate() {
        for f in ant {
            if !p.antecedent.contains(f) {
                return Err(Violation::PremiseMismatch { premise: k + 1, formula: f.clone() });
            }
        }
        for f in suc {
            if !p.succedent.contains(f) {
                return Err(Violation::PremiseMismatch { premise: k + 1, formula: f.clone() });
            }
        }
    }
    let gamma = context(
        &conclusion.antecedent,
        &shape.conclusion.0,
        premises.iter().map(|p| &p.antecedent).zip(shape.premises.iter().map(|s| &s.0)),
    )?;
    let delta = context(
        &conclusion.succedent,
        &shape.conclusion.1,
        premises.iter().map(|p| &p.succedent).zip(shape.premises.iter().map(|s| &s.1)),
    )?;
    if let Some(e) = &shape.eigen {
        let free_in = |set: &BTreeSet<Formula>| set.iter().any(|f| f.has_free_var(&e.var));
        if free_in(&gamma) {
            return Err(Violation::Eigenvariable { var: e.var.clone(), place: EigenPlace::Antecedent });
        }
        if free_in(&delta) {
            return Err(Violation::Eigenvariable { var: e.var.clone(), place: EigenPlace::Succedent });
        }
        if e.var != e.bound && e.body.has_free_var(&e.var) {
            return Err(Violation::Eigenvariable { var: e.var.clone(), place: EigenPlace::Body });
        }
    }
    Ok(())
}

/// The least context shared by one side of the conclusion and the premises,
/// or the first formula that prevents sharing one.
fn context<'a>(
    conclusion: &'a BTreeSet<Formula>,
    active: &[Formula],
    premises: impl Iterator<Item = (&'a BTreeSet<Formula>, &'a Vec<Formula>)> + Clone,
) -> Result<BTreeSet<Formula>, Violation> {
    let mut gamma: BTreeSet<Formula> = conclusion.iter().filter(|f| !active.contains(f)).cloned().collect();
    for (side, added) in premises.clone() {
        gamma.extend(side.iter().filter(|f| !added.contains(f)).cloned());
    }
    for f in &gamma {
        if !conclusion.contains(f) {
            return Err(Violation::Context { formula: f.clone(), location: "the conclusion".to_string() });
        }
        for (k, (side, _)) in premises.clone().enumerate() {
            if !side.contains(f) {
                return Err(Violation::Context { formula: f.clone(), location: format!("premise {}", k + 1) });
            }
        }
    }
    Ok(gamma)
}

/// Whether `after` is `before` with some occurrences of `from` replaced by
/// `to`: both are instances of one formula `A` at `x := to` and `x := from`,
/// with `x` fresh.
pub(crate) fn replaces(before: &Formula, after: &Formula, from: &Term, to: &Term) -> bool {
    fn term(b: &Term, a: &Term, from: &Term, to: &Term) -> bool {
        if b == a {
            return true;
        }
        if b == from && a == to {
            return true;
        }
        match (b, a) {
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term(x, y, from, to))
            }
            _ => false,
        }
    }
    match (before, after) {
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term(x, y, from, to))
        }
        (Formula::Eq(l1, r1), Formula::Eq(l2, r2)) => term(l1, l2, from, to) && term(r1, r2, from, to),
        (Formula::Not(a), Formula::Not(b)) => replaces(a, b, from, to),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2))
        | (Formula::StrongImplies(a1, b1), Formula::StrongImplies(a2, b2)) => {
            replaces(a1, a2, from, to) && replaces(b1, b2, from, to)
        }
        (Formula::Cons(a), Formula::Cons(b)) => replaces(a, b, from, to),
        (Formula::Forall(x, a), Formula::Forall(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
            x == y && replaces(a, b, from, to)
        }
        (b, a) => b == a,
    }
}

fn validate_replacement(conclusion: &Sequent, premises: &[Sequent], inst: &Instantiation) -> Result<(), Violation> {
    let rule = RuleName::EqRepl;
    let eq = inst.principal.clone().ok_or(Violation::MissingPrincipal(rule))?;
    let (t1, t2) = match &eq {
        Formula::Eq(l, r) => (l.clone(), r.clone()),
        other => return Err(Violation::Shape { rule, formula: other.clone() }),
    };
    if premises.len() != 1 {
        return Err(Violation::PremiseCount { rule, expected: 1, found: premises.len() });
    }
    if !conclusion.antecedent.contains(&eq) {
        return Err(Violation::PrincipalAbsent(eq));
    }
    let premise = &premises[0];
    let mut last_error = None;
    let mut non_literal = None;
    for b in &conclusion.antecedent {
        for c in &premise.antecedent {
            // `c` is A[x:=t1] in the premise, `b` is A[x:=t2] in the conclusion.
            if !replaces(c, b, &t1, &t2) {
                continue;
            }
            if !b.is_literal() {
                if b != c {
                    non_literal.get_or_insert_with(|| b.clone());
                }
                continue;
            }
            let shape = Shape {
                conclusion: (vec![eq.clone(), b.clone()], vec![]),
                premises: vec![(vec![c.clone()], vec![])],
                eigen: None,
            };
            match check_shape(rule, conclusion, premises, &shape) {
                Ok(()) => return Ok(()),
                Err(e) => last_error = Some(e),
            }
        }
    }
    if let Some(b) = non_literal {
        return Err(Violation::NotLiteral(b));
    }
    if let Some(e) = last_error {
        return Err(e);
    }
    Err(Violation::NoReplacement { lhs: t1, rhs: t2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::relational(["a", "b"], [("P", 1), ("Q", 1)]).unwrap()
    }

    fn seq(text: &str) -> Sequent {
        Sequent::parse(text, &sig()).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, &sig()).unwrap()
    }

    fn check(conc: &str, rule: RuleName, prem: &[&str], inst: Instantiation) -> Result<(), Violation> {
        let prem: Vec<Sequent> = prem.iter().map(|p| seq(p)).collect();
        validate_rule_instance(&seq(conc), rule, &prem, &inst, Mode::Paraconsistent)
    }

    #[test]
    fn identity_needs_a_literal() {
        assert_eq!(check("P(a), Q(b) |- P(a)", RuleName::Identity, &[], Instantiation::principal(f("P(a)"))), Ok(()));
        let e = check("P(a) & Q(a) |- P(a) & Q(a)", RuleName::Identity, &[], Instantiation::principal(f("P(a) & Q(a)")));
        assert!(matches!(e, Err(Violation::NotLiteral(_))));
        assert!(e.unwrap_err().to_string().contains("A must be a literal"));
    }

    #[test]
    fn context_may_keep_the_principal() {
        let inst = Instantiation::principal(f("P(a) & P(b)"));
        assert_eq!(check("P(a) & P(b) |- P(a)", RuleName::AndL, &["P(a), P(b) |- P(a)"], inst.clone()), Ok(()));
        assert_eq!(
            check("P(a) & P(b) |- P(a)", RuleName::AndL, &["P(a), P(b), P(a) & P(b) |- P(a)"], inst.clone()),
            Ok(())
        );
        assert!(matches!(
            check("P(a) & P(b) |- P(a)", RuleName::AndL, &["P(a), P(b), Q(a) |- P(a)"], inst),
            Err(Violation::Context { .. })
        ));
    }

    #[test]
    fn eigenvariable_conditions() {
        let inst = Instantiation::with_witness(f("forall x. P(x)"), Term::var("y"));
        assert_eq!(check("|- forall x. P(x)", RuleName::ForallR, &["|- P(y)"], inst.clone()), Ok(()));
        assert_eq!(
            check("Q(y) |- forall x. P(x)", RuleName::ForallR, &["Q(y) |- P(y)"], inst),
            Err(Violation::Eigenvariable { var: "y".into(), place: EigenPlace::Antecedent })
        );
        let inst = Instantiation::with_witness(f("exists x. P(x)"), Term::var("x"));
        assert_eq!(check("exists x. P(x) |- ", RuleName::ExistsL, &["P(x) |-"], inst), Ok(()));
    }

    #[test]
    fn not_right_needs_an_atom() {
        let inst = Instantiation::principal(f("~(P(a) & Q(a))"));
        assert_eq!(
            check("|- ~(P(a) & Q(a))", RuleName::NotR, &["P(a) & Q(a) |-"], inst),
            Err(Violation::NotAtomic(f("P(a) & Q(a)")))
        );
        assert_eq!(check("|- ~P(a)", RuleName::NotR, &["P(a) |-"], Instantiation::principal(f("~P(a)"))), Ok(()));
    }

    #[test]
    fn replacement_direction() {
        let inst = Instantiation::principal(f("a = b"));
        assert_eq!(check("a = b, P(b) |- P(a)", RuleName::EqRepl, &["a = b, P(a) |- P(a)"], inst.clone()), Ok(()));
        assert_eq!(check("a = b, P(b) |- P(a)", RuleName::EqRepl, &["P(a) |- P(a)"], inst.clone()), Ok(()));
        assert!(check("a = b, P(a) |- P(b)", RuleName::EqRepl, &["a = b, P(b) |- P(b)"], inst).is_err());
    }

    #[test]
    fn not_left_is_classical() {
        let inst = Instantiation::principal(f("~P(a)"));
        let prem = [seq("|- P(a)")];
        assert_eq!(
            validate_rule_instance(&seq("~P(a) |-"), RuleName::NotL, &prem, &inst, Mode::Paraconsistent),
            Err(Violation::ClassicalOnly)
        );
        assert_eq!(validate_rule_instance(&seq("~P(a) |-"), RuleName::NotL, &prem, &inst, Mode::Classical), Ok(()));
    }
}
