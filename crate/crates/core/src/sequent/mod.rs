//! The sequent calculus: rule instances, derivations, the equality axioms and
//! a bounded backward proof search. The checker is the trusted part; search
//! results are only believed after they pass it.

mod format;
mod rules;
mod search;

pub use format::{parse_proof_file, ProofFile, ProofFileError};
pub use rules::{validate_rule_instance, Violation};
pub use search::{prove_bounded, prove_with, SearchConfig};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::entailment::Mode;
use crate::syntax::{Formula, Signature, Term};

/// `Gamma |- Delta` with both sides finite sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent {
    pub antecedent: BTreeSet<Formula>,
    pub succedent: BTreeSet<Formula>,
}

impl Sequent {
    pub fn new(antecedent: impl IntoIterator<Item = Formula>, succedent: impl IntoIterator<Item = Formula>) -> Sequent {
        Sequent { antecedent: antecedent.into_iter().collect(), succedent: succedent.into_iter().collect() }
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Sequent, crate::syntax::ParseError> {
        let (lhs, rhs) = crate::syntax::parse_sequent_parts(text, sig)?;
        Ok(Sequent::new(lhs, rhs))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(&self.succedent)
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        crate::syntax::free_variables_of(self.formulas())
    }
}

fn join(items: &BTreeSet<Formula>) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.antecedent.is_empty(), self.succedent.is_empty()) {
            (true, true) => f.write_str("|-"),
            (true, false) => write!(f, "|- {}", join(&self.succedent)),
            (false, true) => write!(f, "{} |-", join(&self.antecedent)),
            (false, false) => write!(f, "{} |- {}", join(&self.antecedent), join(&self.succedent)),
        }
    }
}

macro_rules! rule_names {
    ($($variant:ident => $ascii:literal, $symbol:literal;)*) => {
        /// The rules of the calculus, plus the classical-only `not-L`.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum RuleName {
            $($variant,)*
        }

        impl RuleName {
            pub const ALL: &'static [RuleName] = &[$(RuleName::$variant,)*];

            /// Name used in proof files.
            pub fn ascii(self) -> &'static str {
                match self {
                    $(RuleName::$variant => $ascii,)*
                }
            }

            pub fn symbol(self) -> &'static str {
                match self {
                    $(RuleName::$variant => $symbol,)*
                }
            }
        }

        impl FromStr for RuleName {
            type Err = String;

            fn from_str(s: &str) -> Result<RuleName, String> {
                RuleName::ALL
                    .iter()
                    .copied()
                    .find(|r| r.ascii() == s || r.symbol() == s)
                    .ok_or_else(|| format!("unknown rule `{s}`"))
            }
        }
    };
}

rule_names! {
    Identity => "I", "I";
    BotL => "bot-L", "⊥-L";
    AndL => "and-L", "∧-L";
    OrL => "or-L", "∨-L";
    ImpL => "imp-L", "⊃-L";
    ForallL => "all-L", "∀-L";
    ExistsL => "ex-L", "∃-L";
    NotNotL => "notnot-L", "¬¬-L";
    NotAndL => "notand-L", "¬∧-L";
    NotOrL => "notor-L", "¬∨-L";
    NotImpL => "notimp-L", "¬⊃-L";
    NotForallL => "notall-L", "¬∀-L";
    NotExistsL => "notex-L", "¬∃-L";
    EqRefl => "eq-refl", "=-Refl";
    NotR => "not-R", "¬-R";
    AndR => "and-R", "∧-R";
    OrR => "or-R", "∨-R";
    ImpR => "imp-R", "⊃-R";
    ForallR => "all-R", "∀-R";
    ExistsR => "ex-R", "∃-R";
    NotBotR => "notbot-R", "¬⊥-R";
    NotNotR => "notnot-R", "¬¬-R";
    NotAndR => "notand-R", "¬∧-R";
    NotOrR => "notor-R", "¬∨-R";
    NotImpR => "notimp-R", "¬⊃-R";
    NotForallR => "notall-R", "¬∀-R";
    NotExistsR => "notex-R", "¬∃-R";
    EqRepl => "eq-repl", "=-Repl";
    NotL => "not-L", "¬-L";
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

/// What a rule instance needs beyond its sequents: the principal formula
/// and, for quantifier rules and `eq-refl`, the term or eigenvariable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Instantiation {
    pub principal: Option<Formula>,
    pub witness: Option<Term>,
}

impl Instantiation {
    pub fn principal(f: Formula) -> Instantiation {
        Instantiation { principal: Some(f), witness: None }
    }

    pub fn with_witness(f: Formula, t: Term) -> Instantiation {
        Instantiation { principal: Some(f), witness: Some(t) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hypothesis,
    Rule { rule: RuleName, premises: Vec<usize>, inst: Instantiation },
}

/// One line of a derivation. Premise indices are 0-based positions of
/// earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub sequent: Sequent,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Step>,
    pub mode: Mode,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Sequent> {
        self.steps.last().map(|s| &s.sequent)
    }

    pub fn hypotheses(&self) -> Vec<&Sequent> {
        self.steps
            .iter()
            .filter(|s| s.justification == Justification::Hypothesis)
            .map(|s| &s.sequent)
            .collect()
    }

    /// Rules used, without repetition.
    pub fn rules(&self) -> BTreeSet<RuleName> {
        self.steps
            .iter()
            .filter_map(|s| match &s.justification {
                Justification::Rule { rule, .. } => Some(*rule),
                Justification::Hypothesis => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("derivation has no steps")]
    Empty,
    #[error("sequent is not among the hypotheses")]
    NotHypothesis,
    #[error("premise {0} does not refer to an earlier step")]
    ForwardReference(usize),
    #[error(transparent)]
    Violation(#[from] Violation),
}

/// A failing step, numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {error}")]
pub struct CheckError {
    pub step: usize,
    pub error: StepError,
}

/// Checks every step: a hypothesis must be in `hypotheses`, a rule step must
/// be a valid instance whose premises are earlier steps.
pub fn check_derivation(d: &Derivation, hypotheses: &[Sequent]) -> Result<(), CheckError> {
    if d.steps.is_empty() {
        return Err(CheckError { step: 0, error: StepError::Empty });
    }
    for (i, step) in d.steps.iter().enumerate() {
        let fail = |error: StepError| CheckError { step: i + 1, error };
        match &step.justification {
            Justification::Hypothesis => {
                if !hypotheses.contains(&step.sequent) {
                    return Err(fail(StepError::NotHypothesis));
                }
            }
            Justification::Rule { rule, premises, inst } => {
                let mut prem = Vec::with_capacity(premises.len());
                for &p in premises {
                    if p >= i {
                        return Err(fail(StepError::ForwardReference(p + 1)));
                    }
                    prem.push(d.steps[p].sequent.clone());
                }
                validate_rule_instance(&step.sequent, *rule, &prem, inst, d.mode)
                    .map_err(|v| fail(StepError::Violation(v)))?;
            }
        }
    }
    Ok(())
}

/// Whether `d` is a proof (no hypotheses) of `goal`.
pub fn is_proof_of(d: &Derivation, goal: &Sequent) -> bool {
    d.conclusion() == Some(goal) && check_derivation(d, &[]).is_ok()
}

fn indexed(prefix: &str, i: usize) -> Term {
    Term::var(format!("{prefix}{i}"))
}

/// The equality axioms for `sig`: reflexivity, `c = c` for every constant,
/// congruence for every function, `p -> p` for every proposition and
/// substitutivity for every predicate.
pub fn equality_axioms(sig: &Signature) -> Vec<Formula> {
    let mut out = vec![Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x")))];
    for c in sig.constants() {
        out.push(Formula::eq(Term::constant(c), Term::constant(c)));
    }
    let binders = |n: usize| -> Vec<String> {
        (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
    };
    let equations = |n: usize| (1..=n).map(|i| Formula::eq(indexed("x", i), indexed("y", i)));
    for (f, n) in sig.functions() {
        let xs = (1..=n).map(|i| indexed("x", i)).collect();
        let ys = (1..=n).map(|i| indexed("y", i)).collect();
        let body = Formula::conjunction(equations(n))
            .implies(Formula::eq(Term::App(f.to_string(), xs), Term::App(f.to_string(), ys)));
        out.push(Formula::forall_many(binders(n), body));
    }
    for p in sig.propositions() {
        out.push(Formula::Prop(p.to_string()).implies(Formula::Prop(p.to_string())));
    }
    for (p, n) in sig.predicates() {
        let xs = (1..=n).map(|i| indexed("x", i)).collect();
        let ys = (1..=n).map(|i| indexed("y", i)).collect();
        let body = Formula::conjunction(equations(n).chain([Formula::pred(p, xs)])).implies(Formula::pred(p, ys));
        out.push(Formula::forall_many(binders(n), body));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn equality_axioms_follow_the_signature() {
        let sig = Signature::relational(["a", "b"], []).unwrap();
        let strs: Vec<String> = equality_axioms(&sig).iter().map(ToString::to_string).collect();
        assert_eq!(strs, ["forall x. x = x", "a = a", "b = b"]);

        let mut sig = Signature::relational(["a"], [("P", 1)]).unwrap();
        sig.add_proposition("p").unwrap();
        sig.add_function("f", 2).unwrap();
        let axioms = equality_axioms(&sig);
        let want = parse_formula("forall x1,y1. x1 = y1 & P(x1) -> P(y1)", &sig).unwrap();
        assert!(axioms.contains(&want));
        assert!(axioms.contains(&parse_formula("p -> p", &sig).unwrap()));
        let cong = parse_formula("forall x1,y1,x2,y2. x1 = y1 & x2 = y2 -> f(x1,x2) = f(y1,y2)", &sig).unwrap();
        assert!(axioms.contains(&cong));
    }

    #[test]
    fn rule_names_round_trip() {
        for &r in RuleName::ALL {
            assert_eq!(r.ascii().parse::<RuleName>(), Ok(r));
            assert_eq!(r.symbol().parse::<RuleName>(), Ok(r));
        }
        assert_eq!(RuleName::ALL.len(), 29);
    }

    #[test]
    fn sequent_display() {
        let sig = Signature::relational(["a"], [("P", 1)]).unwrap();
        let s = Sequent::parse("P(a), ~P(a) |- ", &sig).unwrap();
        assert_eq!(s.to_string(), "P(a), ~P(a) |-");
        assert_eq!(Sequent::parse("|- ~bot", &sig).unwrap().to_string(), "|- ~bot");
    }
}
