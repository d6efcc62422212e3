//! Seeded random formulas and databases shared by the integration tests.

#![allow(dead_code)]

use paracqa::relational::{FactBasis, RelationalDatabase, RelationalLanguage};
use paracqa::sequent::Sequent;
use paracqa::syntax::{Formula, Signature, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What the generator may use.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    pub constants: Vec<String>,
    pub functions: Vec<(String, usize)>,
    pub propositions: Vec<String>,
    pub predicates: Vec<(String, usize)>,
    pub variables: Vec<String>,
    pub equality: bool,
    pub sugar: bool,
    pub quantifiers: bool,
}

fn owned(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Vocabulary {
    /// Everything the syntax supports.
    pub fn rich() -> Vocabulary {
        Vocabulary {
            constants: owned(&["a", "b"]),
            functions: vec![("f".into(), 1), ("g".into(), 2)],
            propositions: owned(&["p", "q"]),
            predicates: vec![("P".into(), 1), ("R".into(), 2)],
            variables: owned(&["x", "y", "z", "x'"]),
            equality: true,
            sugar: true,
            quantifiers: true,
        }
    }

    /// A relational language: constants and predicates only.
    pub fn relational(constants: &[&str], predicates: &[(&str, usize)]) -> Vocabulary {
        Vocabulary {
            constants: owned(constants),
            functions: Vec::new(),
            propositions: Vec::new(),
            predicates: predicates.iter().map(|(p, k)| (p.to_string(), *k)).collect(),
            variables: owned(&["x", "y"]),
            equality: true,
            sugar: false,
            quantifiers: true,
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for c in &self.constants {
            sig.add_constant(c).unwrap();
        }
        for (f, k) in &self.functions {
            sig.add_function(f, *k).unwrap();
        }
        for p in &self.propositions {
            sig.add_proposition(p).unwrap();
        }
        for (p, k) in &self.predicates {
            sig.add_predicate(p, *k).unwrap();
        }
        sig
    }

    pub fn language(&self) -> RelationalLanguage {
        RelationalLanguage::from_parts(
            self.constants.iter().map(String::as_str),
            self.predicates.iter().map(|(p, k)| (p.as_str(), *k)),
        )
        .unwrap()
    }

    pub fn term(&self, rng: &mut impl Rng, depth: usize) -> Term {
        let roll = rng.gen_range(0..10);
        if depth > 0 && !self.functions.is_empty() && roll < 2 {
            let (f, k) = self.functions.choose(rng).unwrap();
            return Term::App(f.clone(), (0..*k).map(|_| self.term(rng, depth - 1)).collect());
        }
        if roll < 6 || self.variables.is_empty() {
            Term::constant(self.constants.choose(rng).unwrap().clone())
        } else {
            Term::var(self.variables.choose(rng).unwrap().clone())
        }
    }

    pub fn atom(&self, rng: &mut impl Rng) -> Formula {
        loop {
            match rng.gen_range(0..10) {
                0 => return Formula::Falsum,
                1 if self.sugar => return Formula::Top,
                2 if !self.propositions.is_empty() => {
                    return Formula::Prop(self.propositions.choose(rng).unwrap().clone())
                }
                3 | 4 if self.equality => return Formula::eq(self.term(rng, 1), self.term(rng, 1)),
                5..=9 if !self.predicates.is_empty() => {
                    let (p, k) = self.predicates.choose(rng).unwrap();
                    return Formula::pred(p.clone(), (0..*k).map(|_| self.term(rng, 1)).collect());
                }
                _ => {}
            }
        }
    }

    /// A formula of depth at most `depth`.
    pub fn formula(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_range(0..4) == 0 {
            return self.atom(rng);
        }
        let d = depth - 1;
        loop {
            return match rng.gen_range(0..10) {
                0 => self.formula(rng, d).negate(),
                1 => self.formula(rng, d).and(self.formula(rng, d)),
                2 => self.formula(rng, d).or(self.formula(rng, d)),
                3 => self.formula(rng, d).implies(self.formula(rng, d)),
                4 | 5 if self.quantifiers => {
                    let x = self.variables.choose(rng).unwrap().clone();
                    Formula::forall(x, self.formula(rng, d))
                }
                6 | 7 if self.quantifiers => {
                    let x = self.variables.choose(rng).unwrap().clone();
                    Formula::exists(x, self.formula(rng, d))
                }
                8 if self.sugar => self.formula(rng, d).cons(),
                9 if self.sugar => self.formula(rng, d).strong_implies(self.formula(rng, d)),
                _ => continue,
            };
        }
    }

    /// A formula with every free variable bound by a leading `forall`.
    pub fn closed_formula(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        let f = self.formula(rng, depth);
        let free: Vec<String> = f.free_variables().into_iter().collect();
        Formula::forall_many(free, f)
    }
}

/// A random basis over `lang` with at most `max` facts.
pub fn random_basis(rng: &mut impl Rng, lang: &RelationalLanguage, max: usize) -> FactBasis {
    let n = rng.gen_range(0..=max.min(lang.atom_count()));
    let mut ids: Vec<usize> = (0..lang.atom_count()).collect();
    ids.shuffle(rng);
    FactBasis::from_ids(lang, ids.into_iter().take(n))
}

/// A small database with random basis and closed random constraints.
pub fn random_database(rng: &mut impl Rng, voc: &Vocabulary, max_facts: usize, constraints: usize) -> RelationalDatabase {
    let lang = voc.language();
    let basis = random_basis(rng, &lang, max_facts);
    let cs = (0..constraints).map(|_| voc.closed_formula(rng, 3)).collect();
    RelationalDatabase::new(lang, basis, cs).unwrap()
}

/// A random sequent; half of those with an antecedent also get a succedent
/// formula built from it, so that many are provable.
pub fn random_sequent(voc: &Vocabulary, rng: &mut impl Rng) -> Sequent {
    let gamma: Vec<Formula> = (0..rng.gen_range(0..=2)).map(|_| voc.formula(rng, 2)).collect();
    let mut delta: Vec<Formula> = (0..rng.gen_range(0..=1)).map(|_| voc.formula(rng, 2)).collect();
    if let Some(a) = gamma.first() {
        if rng.gen_bool(0.5) {
            let b = voc.formula(rng, 1);
            delta.push(match rng.gen_range(0..3) {
                0 => a.clone().or(b),
                1 => b.implies(a.clone()),
                _ => a.clone().negate().negate(),
            });
        }
    }
    Sequent::new(gamma, delta)
}
