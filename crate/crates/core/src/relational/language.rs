use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::semantics::{index_tuple, Structure, TruthValue};
use crate::syntax::{Formula, Signature, SignatureError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("not a relational language: the constant set must be non-empty and finite")]
    NoConstants,
    #[error("not a relational language: no positive-arity functions allowed (found `{0}`)")]
    Function(String),
    #[error("not a relational language: no propositions allowed (found `{0}`)")]
    Proposition(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// A predicate applied to constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new<S: Into<String>>(predicate: impl Into<String>, args: impl IntoIterator<Item = S>) -> GroundAtom {
        GroundAtom { predicate: predicate.into(), args: args.into_iter().map(Into::into).collect() }
    }

    pub fn to_formula(&self) -> Formula {
        Formula::pred(self.predicate.clone(), self.args.iter().map(|c| Term::constant(c.clone())).collect())
    }

    /// Reads `P(c1,...,cn)` with constant arguments.
    pub fn from_formula(formula: &Formula) -> Option<GroundAtom> {
        match formula {
            Formula::Pred(p, args) => {
                let args = args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => Some(c.clone()),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(GroundAtom { predicate: p.clone(), args })
            }
            _ => None,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.args.join(","))
    }
}

/// A signature with finitely many constants (at least one), predicates, and
/// nothing else. Ground atoms get dense ids: predicates in declaration order,
/// argument tuples lexicographic by constant declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalLanguage {
    signature: Signature,
    constants: Vec<String>,
    predicates: Vec<(String, usize)>,
    offsets: Vec<usize>,
}

/// Checks the conditions for `sig` to be relational.
pub fn validate_relational_language(sig: &Signature) -> Result<(), LanguageError> {
    if let Some((f, _)) = sig.functions().next() {
        return Err(LanguageError::Function(f.to_string()));
    }
    if let Some(p) = sig.propositions().next() {
        return Err(LanguageError::Proposition(p.to_string()));
    }
    if sig.constants().next().is_none() {
        return Err(LanguageError::NoConstants);
    }
    Ok(())
}

impl RelationalLanguage {
    pub fn new(signature: Signature) -> Result<RelationalLanguage, LanguageError> {
        validate_relational_language(&signature)?;
        let constants: Vec<String> = signature.constants().map(str::to_string).collect();
        let predicates: Vec<(String, usize)> = signature.predicates().map(|(p, n)| (p.to_string(), n)).collect();
        let mut offsets = vec![0];
        for (_, n) in &predicates {
            let last = *offsets.last().unwrap();
            offsets.push(last + constants.len().pow(*n as u32));
        }
        Ok(RelationalLanguage { signature, constants, predicates, offsets })
    }

    pub fn from_parts<'a>(
        constants: impl IntoIterator<Item = &'a str>,
        predicates: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<RelationalLanguage, LanguageError> {
        RelationalLanguage::new(Signature::relational(constants, predicates)?)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.iter().find(|(p, _)| p == name).map(|&(_, n)| n)
    }

    fn predicate_position(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|(p, _)| p == name)
    }

    /// Number of atomic facts for the language.
    pub fn atom_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<usize> {
        let pi = self.predicate_position(&atom.predicate)?;
        if self.predicates[pi].1 != atom.args.len() {
            return None;
        }
        let mut index = 0;
        for c in &atom.args {
            index = index * self.constants.len() + self.constant_index(c)?;
        }
        Some(self.offsets[pi] + index)
    }

    pub fn atom(&self, id: usize) -> GroundAtom {
        let pi = self.offsets.partition_point(|&o| o <= id) - 1;
        let (p, n) = &self.predicates[pi];
        let tuple = index_tuple(id - self.offsets[pi], *n, self.constants.len());
        GroundAtom { predicate: p.clone(), args: tuple.into_iter().map(|i| self.constants[i].clone()).collect() }
    }

    /// Every atomic fact, in id order.
    pub fn atoms(&self) -> Vec<GroundAtom> {
        (0..self.atom_count()).map(|id| self.atom(id)).collect()
    }

    pub fn is_atom(&self, atom: &GroundAtom) -> bool {
        self.atom_id(atom).is_some()
    }

    /// Canonical domain elements of an atom's arguments.
    pub fn atom_elements(&self, atom: &GroundAtom) -> Vec<usize> {
        atom.args
            .iter()
            .map(|c| self.constant_index(c).expect("constant of the language"))
            .collect()
    }

    /// The canonical-domain structure (constant `i` names element `i`,
    /// crisp equality) with every predicate entry `False`.
    pub fn blank_structure(&self) -> Structure {
        let mut st = Structure::for_signature(&self.signature, self.constants.len()).expect("non-empty domain");
        for (i, c) in self.constants.iter().enumerate() {
            st.set_constant(c, i).expect("element in range");
        }
        st
    }

    /// Builds a canonical-domain structure from atom values; unlisted atoms are `False`.
    pub fn structure_from_values<'a>(&self, values: impl IntoIterator<Item = (&'a GroundAtom, TruthValue)>) -> Structure {
        let mut st = self.blank_structure();
        for (atom, v) in values {
            st.set_predicate(&atom.predicate, &self.atom_elements(atom), v)
                .expect("atom of the language");
        }
        st
    }
}
