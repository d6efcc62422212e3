//! Relational languages and databases: the structure axioms, completion
//! axioms, relational theories, their models and database consistency.

mod dbfile;
mod language;

pub use dbfile::{parse_database, DbParseError};
pub use language::{validate_relational_language, GroundAtom, LanguageError, RelationalLanguage};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::entailment::{ground_formula, EntailmentError, Engine, Mode};
use crate::semantics::{eval_formula, is_model, Assignment, EvalError, Structure, TruthValue};
use crate::syntax::{substitute, Formula, Term};

/// Largest basis for which [`models_of_theory`] enumerates all models.
pub const MODELS_MAX_FACTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationalError {
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("`{0}` is not an atomic fact of the language")]
    UnknownAtom(String),
    #[error("`{0}` is not a predicate of the language")]
    UnknownPredicate(String),
    #[error("structure is not relational: {0}")]
    NotRelational(String),
    #[error("basis has {0} facts; model enumeration is limited to {MODELS_MAX_FACTS}")]
    TooManyFacts(usize),
    #[error("constraint `{0}` has free variables")]
    OpenConstraint(String),
    #[error("constraint `{0}` does not belong to the language")]
    ForeignConstraint(String),
    #[error(transparent)]
    Entailment(#[from] EntailmentError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("structure does not model the relational theory built from its own facts")]
    Postcondition,
}

/// A finite set of atomic facts, kept in language order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FactBasis {
    #[serde(skip)]
    ids: Vec<usize>,
    atoms: Vec<GroundAtom>,
}

impl FactBasis {
    pub fn empty() -> FactBasis {
        FactBasis { ids: Vec::new(), atoms: Vec::new() }
    }

    pub fn new(lang: &RelationalLanguage, atoms: impl IntoIterator<Item = GroundAtom>) -> Result<FactBasis, RelationalError> {
        let ids = atoms
            .into_iter()
            .map(|a| lang.atom_id(&a).ok_or_else(|| RelationalError::UnknownAtom(a.to_string())))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(FactBasis::from_ids(lang, ids))
    }

    pub fn from_ids(lang: &RelationalLanguage, ids: impl IntoIterator<Item = usize>) -> FactBasis {
        let ids: Vec<usize> = ids.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let atoms = ids.iter().map(|&id| lang.atom(id)).collect();
        FactBasis { ids, atoms }
    }

    /// Parses facts written as formulas, e.g. `P(a)`.
    pub fn parse(lang: &RelationalLanguage, facts: &[&str]) -> Result<FactBasis, RelationalError> {
        let mut atoms = Vec::new();
        for text in facts {
            let f = crate::syntax::parse_formula(text, lang.signature())
                .map_err(|_| RelationalError::UnknownAtom(text.to_string()))?;
            atoms.push(GroundAtom::from_formula(&f).ok_or_else(|| RelationalError::UnknownAtom(text.to_string()))?);
        }
        FactBasis::new(lang, atoms)
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains_id(&self, id: usize) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    /// Ids in exactly one of the two bases.
    pub fn symmetric_difference(&self, other: &FactBasis) -> BTreeSet<usize> {
        let a: BTreeSet<usize> = self.ids.iter().copied().collect();
        let b: BTreeSet<usize> = other.ids.iter().copied().collect();
        a.symmetric_difference(&b).copied().collect()
    }
}

impl fmt::Display for FactBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// An atomic fact or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SemiAtomicFact {
    pub positive: bool,
    pub atom: GroundAtom,
}

impl SemiAtomicFact {
    pub fn positive(atom: GroundAtom) -> SemiAtomicFact {
        SemiAtomicFact { positive: true, atom }
    }

    pub fn negative(atom: GroundAtom) -> SemiAtomicFact {
        SemiAtomicFact { positive: false, atom }
    }

    pub fn to_formula(&self) -> Formula {
        let f = self.atom.to_formula();
        if self.positive {
            f
        } else {
            f.negate()
        }
    }
}

impl fmt::Display for SemiAtomicFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Every semi-atomic fact: for each atom in language order, the positive
/// fact then its negation.
pub fn semi_atoms(lang: &RelationalLanguage) -> Vec<SemiAtomicFact> {
    lang.atoms()
        .into_iter()
        .flat_map(|a| [SemiAtomicFact::positive(a.clone()), SemiAtomicFact::negative(a)])
        .collect()
}

/// A language, a fact basis and integrity constraints. The theory is always
/// derived from the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalDatabase {
    pub language: RelationalLanguage,
    pub basis: FactBasis,
    pub constraints: Vec<Formula>,
}

impl RelationalDatabase {
    pub fn new(language: RelationalLanguage, basis: FactBasis, constraints: Vec<Formula>) -> Result<RelationalDatabase, RelationalError> {
        for c in &constraints {
            if !c.is_closed() {
                return Err(RelationalError::OpenConstraint(c.to_string()));
            }
            ground_formula(c, &language).map_err(|_| RelationalError::ForeignConstraint(c.to_string()))?;
        }
        Ok(RelationalDatabase { language, basis, constraints })
    }

    pub fn theory(&self) -> Vec<Formula> {
        relational_theory(&self.language, &self.basis)
    }

    /// Constraints with derived forms expanded.
    pub fn expanded_constraints(&self) -> Vec<Formula> {
        self.constraints.iter().map(Formula::expand_sugar).collect()
    }

    pub fn with_basis(&self, basis: FactBasis) -> RelationalDatabase {
        RelationalDatabase { language: self.language.clone(), basis, constraints: self.constraints.clone() }
    }
}

fn var(name: &str) -> Term {
    Term::var(name)
}

fn bound_variables(arity: usize) -> Vec<String> {
    if arity == 1 {
        vec!["x".to_string()]
    } else {
        (1..=arity).map(|i| format!("x{i}")).collect()
    }
}

pub fn equality_consistency_axiom() -> Formula {
    Formula::forall_many(["x", "x'"], Formula::eq(var("x"), var("x'")).cons())
}

pub fn domain_closure_axiom(lang: &RelationalLanguage) -> Formula {
    let disjuncts = lang.constants().iter().map(|c| Formula::eq(var("x"), Term::constant(c.clone())));
    Formula::forall("x", Formula::disjunction(disjuncts))
}

pub fn unique_name_axioms(lang: &RelationalLanguage) -> Vec<Formula> {
    let cs = lang.constants();
    let mut out = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            out.push(Formula::eq(Term::constant(cs[i].clone()), Term::constant(cs[j].clone())).negate());
        }
    }
    out
}

/// The relational structure axioms: equality consistency, domain closure,
/// then the unique name axioms.
pub fn rsa(lang: &RelationalLanguage) -> Vec<Formula> {
    let mut out = vec![equality_consistency_axiom(), domain_closure_axiom(lang)];
    out.extend(unique_name_axioms(lang));
    out
}

/// `forall xs. P(xs) => (facts of P as equations)`, or `=> bot` when the
/// basis has no fact about `P`.
pub fn completion_axiom(lang: &RelationalLanguage, basis: &FactBasis, predicate: &str) -> Result<Formula, RelationalError> {
    let arity = lang
        .predicate_arity(predicate)
        .ok_or_else(|| RelationalError::UnknownPredicate(predicate.to_string()))?;
    let vars = bound_variables(arity);
    let head = Formula::pred(predicate, vars.iter().map(|v| var(v)).collect());
    let disjuncts = basis.atoms().iter().filter(|a| a.predicate == predicate).map(|a| {
        Formula::conjunction(
            vars.iter()
                .zip(&a.args)
                .map(|(v, c)| Formula::eq(var(v), Term::constant(c.clone()))),
        )
    });
    Ok(Formula::forall_many(vars.clone(), head.strong_implies(Formula::disjunction(disjuncts))))
}

/// Structure axioms, the facts and one completion axiom per predicate.
/// Derived forms are kept; use [`relational_theory`] for the expanded set.
pub fn relational_theory_sugared(lang: &RelationalLanguage, basis: &FactBasis) -> Vec<Formula> {
    let mut out = rsa(lang);
    out.extend(basis.atoms().iter().map(GroundAtom::to_formula));
    for (p, _) in lang.predicates() {
        out.push(completion_axiom(lang, basis, p).expect("declared predicate"));
    }
    out
}

pub fn relational_theory(lang: &RelationalLanguage, basis: &FactBasis) -> Vec<Formula> {
    relational_theory_sugared(lang, basis).iter().map(Formula::expand_sugar).collect()
}

/// Every model of the relational theory over the canonical domain: each
/// basis atom is True or Both independently, all other atoms are False. The
/// all-True model comes first; bit `i` of the index turns fact `i` to Both.
pub fn models_of_theory(lang: &RelationalLanguage, basis: &FactBasis) -> Result<Vec<Structure>, RelationalError> {
    if basis.len() > MODELS_MAX_FACTS {
        return Err(RelationalError::TooManyFacts(basis.len()));
    }
    Ok((0..1usize << basis.len())
        .map(|mask| {
            lang.structure_from_values(basis.atoms().iter().enumerate().map(|(i, a)| {
                let v = if mask >> i & 1 == 1 { TruthValue::Both } else { TruthValue::True };
                (a, v)
            }))
        })
        .collect())
}

pub fn canonical_model(lang: &RelationalLanguage, basis: &FactBasis) -> Structure {
    lang.structure_from_values(basis.atoms().iter().map(|a| (a, TruthValue::True)))
}

/// For each constant of the language, the element it names, after checking
/// that `st` is a relational structure: constants name every element exactly
/// once, equality is crisp identity, predicates have their declared arities.
pub fn check_relational(lang: &RelationalLanguage, st: &Structure) -> Result<Vec<usize>, RelationalError> {
    let bad = |m: String| RelationalError::NotRelational(m);
    st.check_signature(lang.signature()).map_err(|e| bad(e.to_string()))?;
    if st.size() != lang.constant_count() {
        return Err(bad(format!(
            "domain has {} elements for {} constants",
            st.size(),
            lang.constant_count()
        )));
    }
    let mut named = vec![None; st.size()];
    let mut elements = Vec::new();
    for c in lang.constants() {
        let e = st.constant(c).expect("checked above");
        if let Some(other) = named[e].replace(c.clone()) {
            return Err(bad(format!("`{other}` and `{c}` name the same element")));
        }
        elements.push(e);
    }
    for d in 0..st.size() {
        for e in 0..st.size() {
            let crisp = if d == e { TruthValue::True } else { TruthValue::False };
            if st.equality(d, e) != crisp {
                return Err(bad("equality is not crisp identity".to_string()));
            }
        }
    }
    Ok(elements)
}

/// Value of an atom in a relational structure, reading constants through
/// the structure's own naming.
pub fn atom_value(lang: &RelationalLanguage, st: &Structure, atom: &GroundAtom) -> TruthValue {
    let args: Vec<usize> = atom.args.iter().map(|c| st.constant(c).expect("constant of the language")).collect();
    let _ = lang;
    st.predicate(&atom.predicate, &args).expect("predicate of the language")
}

/// Atom values in language order; equal vectors mean isomorphic relational
/// structures.
pub fn canonical_valuation(lang: &RelationalLanguage, st: &Structure) -> Result<Vec<TruthValue>, RelationalError> {
    check_relational(lang, st)?;
    Ok(lang.atoms().iter().map(|a| atom_value(lang, st, a)).collect())
}

/// Identifies Both with True on predicates.
pub fn nabla(lang: &RelationalLanguage, st: &Structure) -> Result<Structure, RelationalError> {
    check_relational(lang, st)?;
    let mut out = st.clone();
    out.map_predicates(|v| if v == TruthValue::Both { TruthValue::True } else { v });
    Ok(out)
}

/// The basis whose relational theory `st` models: its designated atoms.
pub fn theory_from_structure(lang: &RelationalLanguage, st: &Structure) -> Result<FactBasis, RelationalError> {
    check_relational(lang, st)?;
    let ids = (0..lang.atom_count()).filter(|&id| atom_value(lang, st, &lang.atom(id)).is_designated());
    let basis = FactBasis::from_ids(lang, ids);
    if !is_model(st, &relational_theory(lang, &basis))? {
        return Err(RelationalError::Postcondition);
    }
    Ok(basis)
}

/// A constraint with its leading universal variables replaced by constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintInstance {
    pub constraint: usize,
    pub constants: Vec<String>,
    #[serde(serialize_with = "serialize_display")]
    pub formula: Formula,
}

pub(crate) fn serialize_display<T: fmt::Display, S: serde::Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub(crate) fn serialize_displays<T: fmt::Display, S: serde::Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(ToString::to_string))
}

impl ConstraintInstance {
    /// Ground atoms the instance depends on, in language order.
    pub fn atoms(&self, lang: &RelationalLanguage) -> Vec<GroundAtom> {
        let ground = ground_formula(&self.formula, lang).expect("constraints are validated");
        let mut ids = BTreeSet::new();
        collect_atom_ids(&ground, lang, &mut ids);
        ids.into_iter().map(|id| lang.atom(id)).collect()
    }
}

pub(crate) fn collect_atom_ids(formula: &Formula, lang: &RelationalLanguage, out: &mut BTreeSet<usize>) {
    let mut stack = vec![formula];
    while let Some(f) = stack.pop() {
        match f {
            Formula::Pred(..) => {
                if let Some(id) = GroundAtom::from_formula(f).and_then(|a| lang.atom_id(&a)) {
                    out.insert(id);
                }
            }
            Formula::Not(a) | Formula::Cons(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => stack.push(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::StrongImplies(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Formula::Falsum | Formula::Top | Formula::Prop(_) | Formula::Eq(..) => {}
        }
    }
}

/// All instances of every constraint, constraints in order, tuples lexicographic.
pub fn constraint_instances(db: &RelationalDatabase) -> Vec<ConstraintInstance> {
    let lang = &db.language;
    let n = lang.constant_count();
    let mut out = Vec::new();
    for (ci, constraint) in db.constraints.iter().enumerate() {
        let mut vars = Vec::new();
        let mut body = constraint;
        while let Formula::Forall(v, inner) = body {
            vars.push(v.clone());
            body = inner;
        }
        for code in 0..n.pow(vars.len() as u32) {
            let chosen: Vec<String> = crate::semantics::index_tuple(code, vars.len(), n)
                .into_iter()
                .map(|i| lang.constants()[i].clone())
                .collect();
            let formula = vars
                .iter()
                .zip(&chosen)
                .fold(body.clone(), |acc, (v, c)| substitute(&acc, v, &Term::constant(c.clone())));
            out.push(ConstraintInstance { constraint: ci, constants: chosen, formula });
        }
    }
    out
}

/// Constraint instances valued False in `st`.
pub fn falsified_instances(db: &RelationalDatabase, st: &Structure) -> Result<Vec<ConstraintInstance>, RelationalError> {
    let asg = Assignment::new(0);
    let mut out = Vec::new();
    for inst in constraint_instances(db) {
        if eval_formula(st, &asg, &inst.formula)? == TruthValue::False {
            out.push(inst);
        }
    }
    Ok(out)
}

/// How database consistency is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConsistencyCheck {
    /// Every semi-atomic consequence of the theory must have a consistent
    /// (`cons`) value under theory plus constraints, three-valued.
    Literal,
    /// The theory plus constraints must have a two-valued model.
    ClassicalSat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// A semi-atomic consequence whose consistency is not entailed.
    Fact(SemiAtomicFact),
    /// A constraint instance that is False in the canonical model.
    Instance(ConstraintInstance),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Fact(fact) => write!(f, "cons({fact}) is not entailed"),
            Witness::Instance(inst) => write!(f, "constraint {} violated: {}", inst.constraint + 1, inst.formula),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub check: ConsistencyCheck,
    pub consistent: bool,
    pub witnesses: Vec<Witness>,
}

pub fn db_consistent(db: &RelationalDatabase, check: ConsistencyCheck) -> Result<ConsistencyReport, RelationalError> {
    let lang = &db.language;
    let theory = db.theory();
    match check {
        ConsistencyCheck::Literal => {
            let plain = Engine::new(lang, &theory, Mode::Paraconsistent)?;
            let mut with_constraints = theory.clone();
            with_constraints.extend(db.expanded_constraints());
            let full = Engine::new(lang, &with_constraints, Mode::Paraconsistent)?;
            let mut witnesses = Vec::new();
            for fact in semi_atoms(lang) {
                let f = fact.to_formula();
                if plain.entails(std::slice::from_ref(&f))? && !full.entails(&[f.cons().expand_sugar()])? {
                    witnesses.push(Witness::Fact(fact));
                }
            }
            Ok(ConsistencyReport { check, consistent: witnesses.is_empty(), witnesses })
        }
        ConsistencyCheck::ClassicalSat => {
            let mut premises = theory;
            premises.extend(db.expanded_constraints());
            let consistent = Engine::new(lang, &premises, Mode::Classical)?.is_satisfiable();
            let witnesses = if consistent {
                Vec::new()
            } else {
                falsified_instances(db, &canonical_model(lang, &db.basis))?
                    .into_iter()
                    .map(Witness::Instance)
                    .collect()
            };
            Ok(ConsistencyReport { check, consistent, witnesses })
        }
    }
}
