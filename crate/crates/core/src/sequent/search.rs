//! Backward proof search with a depth bound. Axioms close a branch; rules
//! whose premises are equivalent to their conclusion are applied eagerly with
//! the principal formula dropped; the remaining rules are tried in turn,
//! keeping the principal formula. Quantifier instances range over a fixed
//! term list plus the free variables of the sequent at hand.

use std::collections::{BTreeSet, HashMap};

use super::{Derivation, Instantiation, Justification, RuleName, Sequent, Step};
use crate::entailment::Mode;
use crate::relational::RelationalLanguage;
use crate::syntax::{fresh_variable, substitute, Formula, Term};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: Mode,
    /// Candidate instances for `all-L`, `notex-L`, `ex-R` and `notall-R`.
    pub terms: Vec<Term>,
    /// Whether `eq-refl` and `eq-repl` may be used.
    pub equality_rules: bool,
}

impl SearchConfig {
    pub fn for_language(lang: &RelationalLanguage, mode: Mode) -> SearchConfig {
        SearchConfig {
            mode,
            terms: lang.constants().iter().map(|c| Term::constant(c.clone())).collect(),
            equality_rules: true,
        }
    }
}

/// Searches for a proof using at most `depth` rule applications on every
/// branch (an axiom counts as one). Not finding a proof proves nothing.
pub fn prove_bounded(goal: &Sequent, depth: usize, lang: &RelationalLanguage, mode: Mode) -> Option<Derivation> {
    prove_with(goal, depth, &SearchConfig::for_language(lang, mode))
}

pub fn prove_with(goal: &Sequent, depth: usize, config: &SearchConfig) -> Option<Derivation> {
    let mut searcher = Searcher { config, failed: HashMap::new() };
    for d in 1..=depth {
        if let Some(tree) = searcher.search(goal, d) {
            let mut steps = Vec::new();
            let mut seen = HashMap::new();
            flatten(tree, &mut steps, &mut seen);
            let derivation = Derivation { steps, mode: config.mode };
            debug_assert_eq!(super::check_derivation(&derivation, &[]), Ok(()));
            return Some(derivation);
        }
    }
    None
}

struct Node {
    sequent: Sequent,
    rule: RuleName,
    inst: Instantiation,
    children: Vec<Node>,
}

fn flatten(node: Node, steps: &mut Vec<Step>, seen: &mut HashMap<Sequent, usize>) -> usize {
    if let Some(&i) = seen.get(&node.sequent) {
        return i;
    }
    let premises = node.children.into_iter().map(|c| flatten(c, steps, seen)).collect();
    steps.push(Step {
        sequent: node.sequent.clone(),
        justification: Justification::Rule { rule: node.rule, premises, inst: node.inst },
    });
    seen.insert(node.sequent, steps.len() - 1);
    steps.len() - 1
}

type Expansion = (RuleName, Instantiation, Vec<Sequent>);

struct Searcher<'c> {
    config: &'c SearchConfig,
    failed: HashMap<Sequent, usize>,
}

fn with_ant(s: &Sequent, remove: Option<&Formula>, add: &[Formula]) -> Sequent {
    let mut out = s.clone();
    if let Some(r) = remove {
        out.antecedent.remove(r);
    }
    out.antecedent.extend(add.iter().cloned());
    out
}

fn with_suc(s: &Sequent, remove: Option<&Formula>, add: &[Formula]) -> Sequent {
    let mut out = s.clone();
    if let Some(r) = remove {
        out.succedent.remove(r);
    }
    out.succedent.extend(add.iter().cloned());
    out
}

fn not(f: &Formula) -> Formula {
    f.clone().negate()
}

fn eigen_for(s: &Sequent, x: &str, body: &Formula) -> String {
    let mut avoid = s.free_variables();
    if !avoid.contains(x) {
        return x.to_string();
    }
    avoid.extend(body.free_variables());
    fresh_variable(x, &avoid)
}

/// Subterms of the sequent whose variables are all free in it.
fn sequent_terms(s: &Sequent) -> BTreeSet<Term> {
    fn walk_term(t: &Term, free: &BTreeSet<String>, out: &mut BTreeSet<Term>) {
        if t.free_variables().is_subset(free) {
            out.insert(t.clone());
        }
        if let Term::App(_, args) = t {
            args.iter().for_each(|a| walk_term(a, free, out));
        }
    }
    fn walk(f: &Formula, free: &BTreeSet<String>, out: &mut BTreeSet<Term>) {
        match f {
            Formula::Pred(_, args) => args.iter().for_each(|a| walk_term(a, free, out)),
            Formula::Eq(l, r) => {
                walk_term(l, free, out);
                walk_term(r, free, out);
            }
            Formula::Not(a) | Formula::Cons(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => walk(a, free, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::StrongImplies(a, b) => {
                walk(a, free, out);
                walk(b, free, out);
            }
            Formula::Falsum | Formula::Top | Formula::Prop(_) => {}
        }
    }
    let free = s.free_variables();
    let mut out = BTreeSet::new();
    s.formulas().for_each(|f| walk(f, &free, &mut out));
    out
}

/// Every way of replacing a non-empty set of occurrences of `from` in the
/// literal `lit` by `to`.
fn replacements(lit: &Formula, from: &Term, to: &Term) -> Vec<Formula> {
    const MAX_OCCURRENCES: usize = 6;
    fn count(t: &Term, from: &Term) -> usize {
        if t == from {
            return 1;
        }
        match t {
            Term::App(_, args) => args.iter().map(|a| count(a, from)).sum(),
            _ => 0,
        }
    }
    fn rewrite(t: &Term, from: &Term, to: &Term, mask: usize, next: &mut usize) -> Term {
        if t == from {
            let i = *next;
            *next += 1;
            return if mask >> i & 1 == 1 { to.clone() } else { t.clone() };
        }
        match t {
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rewrite(a, from, to, mask, next)).collect()),
            _ => t.clone(),
        }
    }
    fn apply(f: &Formula, from: &Term, to: &Term, mask: usize, next: &mut usize) -> Formula {
        match f {
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|a| rewrite(a, from, to, mask, next)).collect()),
            Formula::Eq(l, r) => {
                let l = rewrite(l, from, to, mask, next);
                Formula::Eq(l, rewrite(r, from, to, mask, next))
            }
            Formula::Not(a) => apply(a, from, to, mask, next).negate(),
            other => other.clone(),
        }
    }
    fn occurrences(f: &Formula, from: &Term) -> usize {
        match f {
            Formula::Pred(_, args) => args.iter().map(|a| count(a, from)).sum(),
            Formula::Eq(l, r) => count(l, from) + count(r, from),
            Formula::Not(a) => occurrences(a, from),
            _ => 0,
        }
    }
    let n = occurrences(lit, from).min(MAX_OCCURRENCES);
    (1..1usize << n).map(|mask| apply(lit, from, to, mask, &mut 0)).collect()
}

impl Searcher<'_> {
    fn search(&mut self, s: &Sequent, depth: usize) -> Option<Node> {
        if depth == 0 || self.failed.get(s).is_some_and(|&d| d >= depth) {
            return None;
        }
        if let Some((rule, inst)) = closer(s) {
            return Some(Node { sequent: s.clone(), rule, inst, children: Vec::new() });
        }
        let found = if depth == 1 {
            None
        } else if let Some(expansion) = self.invertible(s) {
            self.try_expansion(s, expansion, depth)
        } else {
            let mut found = None;
            for expansion in self.choices(s) {
                if let Some(node) = self.try_expansion(s, expansion, depth) {
                    found = Some(node);
                    break;
                }
            }
            found
        };
        if found.is_none() {
            let entry = self.failed.entry(s.clone()).or_insert(0);
            *entry = (*entry).max(depth);
        }
        found
    }

    fn try_expansion(&mut self, s: &Sequent, (rule, inst, premises): Expansion, depth: usize) -> Option<Node> {
        let mut children = Vec::with_capacity(premises.len());
        for p in &premises {
            children.push(self.search(p, depth - 1)?);
        }
        Some(Node { sequent: s.clone(), rule, inst, children })
    }

    fn invertible(&self, s: &Sequent) -> Option<Expansion> {
        use RuleName::*;
        for p in &s.antecedent {
            let inst = Instantiation::principal(p.clone());
            let r = Some(p);
            let exp = match p {
                Formula::And(a, b) => (AndL, inst, vec![with_ant(s, r, &[(**a).clone(), (**b).clone()])]),
                Formula::Or(a, b) => (OrL, inst, vec![with_ant(s, r, &[(**a).clone()]), with_ant(s, r, &[(**b).clone()])]),
                Formula::Implies(a, b) => {
                    let rest = with_ant(s, r, &[]);
                    (ImpL, inst, vec![with_suc(&rest, None, &[(**a).clone()]), with_ant(s, r, &[(**b).clone()])])
                }
                Formula::Exists(x, a) => {
                    let y = eigen_for(s, x, a);
                    let body = substitute(a, x, &Term::var(y.clone()));
                    (ExistsL, Instantiation::with_witness(p.clone(), Term::var(y)), vec![with_ant(s, r, &[body])])
                }
                Formula::Not(inner) => match &**inner {
                    Formula::Not(a) => (NotNotL, inst, vec![with_ant(s, r, &[(**a).clone()])]),
                    Formula::And(a, b) => (NotAndL, inst, vec![with_ant(s, r, &[not(a)]), with_ant(s, r, &[not(b)])]),
                    Formula::Or(a, b) => (NotOrL, inst, vec![with_ant(s, r, &[not(a), not(b)])]),
                    Formula::Implies(a, b) => (NotImpL, inst, vec![with_ant(s, r, &[(**a).clone(), not(b)])]),
                    Formula::Forall(x, a) => {
                        let y = eigen_for(s, x, a);
                        let body = not(&substitute(a, x, &Term::var(y.clone())));
                        (NotForallL, Instantiation::with_witness(p.clone(), Term::var(y)), vec![with_ant(s, r, &[body])])
                    }
                    a if self.config.mode == Mode::Classical && a.is_atomic() && *a != Formula::Falsum => {
                        let rest = with_ant(s, r, &[]);
                        (NotL, inst, vec![with_suc(&rest, None, std::slice::from_ref(a))])
                    }
                    _ => continue,
                },
                _ => continue,
            };
            return Some(exp);
        }
        for p in &s.succedent {
            let inst = Instantiation::principal(p.clone());
            let r = Some(p);
            let exp = match p {
                Formula::Or(a, b) => (OrR, inst, vec![with_suc(s, r, &[(**a).clone(), (**b).clone()])]),
                Formula::And(a, b) => (AndR, inst, vec![with_suc(s, r, &[(**a).clone()]), with_suc(s, r, &[(**b).clone()])]),
                Formula::Implies(a, b) => {
                    let rest = with_suc(s, r, &[(**b).clone()]);
                    (ImpR, inst, vec![with_ant(&rest, None, &[(**a).clone()])])
                }
                Formula::Forall(x, a) => {
                    let y = eigen_for(s, x, a);
                    let body = substitute(a, x, &Term::var(y.clone()));
                    (ForallR, Instantiation::with_witness(p.clone(), Term::var(y)), vec![with_suc(s, r, &[body])])
                }
                Formula::Not(inner) => match &**inner {
                    Formula::Not(a) => (NotNotR, inst, vec![with_suc(s, r, &[(**a).clone()])]),
                    Formula::And(a, b) => (NotAndR, inst, vec![with_suc(s, r, &[not(a), not(b)])]),
                    Formula::Or(a, b) => (NotOrR, inst, vec![with_suc(s, r, &[not(a)]), with_suc(s, r, &[not(b)])]),
                    Formula::Implies(a, b) => (NotImpR, inst, vec![with_suc(s, r, &[(**a).clone()]), with_suc(s, r, &[not(b)])]),
                    Formula::Exists(x, a) => {
                        let y = eigen_for(s, x, a);
                        let body = not(&substitute(a, x, &Term::var(y.clone())));
                        (NotExistsR, Instantiation::with_witness(p.clone(), Term::var(y)), vec![with_suc(s, r, &[body])])
                    }
                    _ => continue,
                },
                _ => continue,
            };
            return Some(exp);
        }
        None
    }

    fn choices(&self, s: &Sequent) -> Vec<Expansion> {
        use RuleName::*;
        let mut out = Vec::new();
        for p in &s.succedent {
            if let Formula::Not(a) = p {
                if a.is_atomic() && !s.antecedent.contains(a) {
                    out.push((NotR, Instantiation::principal(p.clone()), vec![with_ant(s, None, &[(**a).clone()])]));
                }
            }
        }
        let mut terms: Vec<Term> = self.config.terms.clone();
        for v in s.free_variables() {
            let t = Term::var(v);
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
        for p in &s.antecedent {
            let (rule, x, a, negated) = match p {
                Formula::Forall(x, a) => (ForallL, x, a, false),
                Formula::Not(inner) => match &**inner {
                    Formula::Exists(x, a) => (NotExistsL, x, a, true),
                    _ => continue,
                },
                _ => continue,
            };
            for t in &terms {
                let body = substitute(a, x, t);
                let body = if negated { not(&body) } else { body };
                if !s.antecedent.contains(&body) {
                    out.push((rule, Instantiation::with_witness(p.clone(), t.clone()), vec![with_ant(s, None, &[body])]));
                }
            }
        }
        for p in &s.succedent {
            let (rule, x, a, negated) = match p {
                Formula::Exists(x, a) => (ExistsR, x, a, false),
                Formula::Not(inner) => match &**inner {
                    Formula::Forall(x, a) => (NotForallR, x, a, true),
                    _ => continue,
                },
                _ => continue,
            };
            for t in &terms {
                let body = substitute(a, x, t);
                let body = if negated { not(&body) } else { body };
                if !s.succedent.contains(&body) {
                    out.push((rule, Instantiation::with_witness(p.clone(), t.clone()), vec![with_suc(s, None, &[body])]));
                }
            }
        }
        if self.config.equality_rules {
            for eq in &s.antecedent {
                let Formula::Eq(t1, t2) = eq else { continue };
                if t1 == t2 {
                    continue;
                }
                for b in &s.antecedent {
                    if !b.is_literal() {
                        continue;
                    }
                    for c in replacements(b, t2, t1) {
                        if !s.antecedent.contains(&c) {
                            out.push((EqRepl, Instantiation::principal(eq.clone()), vec![with_ant(s, None, &[c])]));
                        }
                    }
                }
            }
            for t in sequent_terms(s) {
                let refl = Formula::eq(t.clone(), t.clone());
                if !s.antecedent.contains(&refl) {
                    out.push((EqRefl, Instantiation { principal: None, witness: Some(t) }, vec![with_ant(s, None, &[refl])]));
                }
            }
        }
        out
    }
}

fn closer(s: &Sequent) -> Option<(RuleName, Instantiation)> {
    if s.antecedent.contains(&Formula::Falsum) {
        return Some((RuleName::BotL, Instantiation::principal(Formula::Falsum)));
    }
    let not_bot = Formula::Falsum.negate();
    if s.succedent.contains(&not_bot) {
        return Some((RuleName::NotBotR, Instantiation::principal(not_bot)));
    }
    s.antecedent
        .iter()
        .find(|a| a.is_literal() && s.succedent.contains(*a))
        .map(|a| (RuleName::Identity, Instantiation::principal(a.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::check_derivation;

    fn lang() -> RelationalLanguage {
        RelationalLanguage::from_parts(["a", "b"], [("P", 1), ("Q", 1)]).unwrap()
    }

    fn prove(text: &str, depth: usize) -> Option<Derivation> {
        let lang = lang();
        let goal = Sequent::parse(text, lang.signature()).unwrap();
        let d = prove_bounded(&goal, depth, &lang, Mode::Paraconsistent)?;
        assert_eq!(check_derivation(&d, &[]), Ok(()));
        assert_eq!(d.conclusion(), Some(&goal));
        Some(d)
    }

    #[test]
    fn trivial_goals() {
        assert_eq!(prove("|- ~bot", 1).unwrap().steps.len(), 1);
        assert_eq!(prove("P(a) |- P(a)", 1).unwrap().rules(), [RuleName::Identity].into());
        assert!(prove("|- bot", 6).is_none());
    }

    #[test]
    fn quantifiers_and_negation() {
        assert!(prove("forall x. P(x) |- P(a) & P(b)", 4).is_some());
        assert!(prove("|- exists x. P(x) | ~P(x)", 4).is_some());
        assert!(prove("|- (forall x. P(x)) -> exists y. P(y)", 5).is_some());
        assert!(prove("~(exists x. P(x)) |- forall x. ~P(x)", 5).is_some());
        assert!(prove("P(a), ~P(a) |- Q(b)", 6).is_none());
    }

    #[test]
    fn equality_goals() {
        assert!(prove("a = b, P(b) |- P(a)", 2).is_some());
        assert!(prove("a = b, P(a) |- P(b)", 5).is_some());
        assert!(prove("|- a = a", 3).is_some());
    }

    #[test]
    fn classical_mode_explodes() {
        let lang = lang();
        let goal = Sequent::parse("P(a), ~P(a) |- Q(b)", lang.signature()).unwrap();
        let d = prove_bounded(&goal, 3, &lang, Mode::Classical).unwrap();
        assert!(d.rules().contains(&RuleName::NotL));
        assert_eq!(check_derivation(&d, &[]), Ok(()));
    }
}
