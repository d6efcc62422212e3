use indexmap::IndexMap;
use thiserror::Error;

use super::RESERVED_WORDS;

/// What a declared name denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Constant,
    Function(usize),
    Proposition,
    Predicate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("invalid symbol name `{0}`: names start with a letter and contain only [A-Za-z0-9_]")]
    InvalidName(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` must have arity at least 1")]
    ZeroArity(String),
}

/// A finite signature. All names live in one namespace, so the name sets of
/// the different symbol kinds are disjoint by construction.
///
/// Declaration order is kept; constants in particular are ordered, which fixes
/// the canonical domain of relational structures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: IndexMap<String, Symbol>,
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    fn declare(&mut self, name: &str, symbol: Symbol) -> Result<(), SignatureError> {
        if !is_valid_name(name) {
            return Err(SignatureError::InvalidName(name.to_string()));
        }
        if RESERVED_WORDS.contains(&name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        if matches!(symbol, Symbol::Function(0) | Symbol::Predicate(0)) {
            return Err(SignatureError::ZeroArity(name.to_string()));
        }
        if self.symbols.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        self.symbols.insert(name.to_string(), symbol);
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.declare(name, Symbol::Constant)
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.declare(name, Symbol::Function(arity))
    }

    pub fn add_proposition(&mut self, name: &str) -> Result<(), SignatureError> {
        self.declare(name, Symbol::Proposition)
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.declare(name, Symbol::Predicate(arity))
    }

    /// Builds a signature from constants and `(name, arity)` predicates.
    pub fn relational<'a>(
        constants: impl IntoIterator<Item = &'a str>,
        predicates: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Signature, SignatureError> {
        let mut sig = Signature::new();
        for c in constants {
            sig.add_constant(c)?;
        }
        for (p, n) in predicates {
            sig.add_predicate(p, n)?;
        }
        Ok(sig)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).copied()
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.lookup(name) == Some(Symbol::Constant)
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> + '_ {
        self.symbols
            .iter()
            .filter(|(_, s)| **s == Symbol::Constant)
            .map(|(n, _)| n.as_str())
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().filter_map(|(n, s)| match s {
            Symbol::Function(k) => Some((n.as_str(), *k)),
            _ => None,
        })
    }

    pub fn propositions(&self) -> impl Iterator<Item = &str> + '_ {
        self.symbols
            .iter()
            .filter(|(_, s)| **s == Symbol::Proposition)
            .map(|(n, _)| n.as_str())
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().filter_map(|(n, s)| match s {
            Symbol::Predicate(k) => Some((n.as_str(), *k)),
            _ => None,
        })
    }

    /// Position of a constant in declaration order.
    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants().position(|c| c == name)
    }

    /// Position of a predicate in declaration order.
    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates().position(|(p, _)| p == name)
    }
}
