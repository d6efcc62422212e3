use std::collections::BTreeMap;

use indexmap::IndexMap;
use thiserror::Error;

use super::TruthValue;
use crate::syntax::{Signature, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a structure needs a non-empty domain")]
    EmptyDomain,
    #[error("element {0} is outside the domain")]
    OutOfDomain(usize),
    #[error("`{name}` has arity {expected}, got a tuple of length {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("`{0}` is not interpreted")]
    Uninterpreted(String),
    #[error("equality must be designated on the diagonal (element {0})")]
    Diagonal(usize),
}

/// A total map from `domain^arity` to values, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table<T> {
    arity: usize,
    values: Vec<T>,
}

impl<T: Copy> Table<T> {
    fn filled(arity: usize, size: usize, value: T) -> Table<T> {
        Table { arity, values: vec![value; size.pow(arity as u32)] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

fn tuple_index(tuple: &[usize], size: usize) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * size + e)
}

/// Decodes a dense index back into the tuple it stands for.
pub fn index_tuple(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// A structure over a finite domain `{0, ..., size-1}` of opaque elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    size: usize,
    constants: IndexMap<String, usize>,
    functions: IndexMap<String, Table<usize>>,
    propositions: IndexMap<String, TruthValue>,
    predicates: IndexMap<String, Table<TruthValue>>,
    equality: Vec<TruthValue>,
}

impl Structure {
    /// A structure with crisp identity as equality and nothing else interpreted.
    pub fn new(size: usize) -> Result<Structure, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let mut equality = vec![TruthValue::False; size * size];
        for d in 0..size {
            equality[d * size + d] = TruthValue::True;
        }
        Ok(Structure {
            size,
            constants: IndexMap::new(),
            functions: IndexMap::new(),
            propositions: IndexMap::new(),
            predicates: IndexMap::new(),
            equality,
        })
    }

    /// Interprets every symbol of `sig`: constants and function values as
    /// element 0, propositions and predicates as `False`.
    pub fn for_signature(sig: &Signature, size: usize) -> Result<Structure, StructureError> {
        let mut st = Structure::new(size)?;
        for c in sig.constants() {
            st.constants.insert(c.to_string(), 0);
        }
        for (f, n) in sig.functions() {
            st.functions.insert(f.to_string(), Table::filled(n, size, 0));
        }
        for p in sig.propositions() {
            st.propositions.insert(p.to_string(), TruthValue::False);
        }
        for (p, n) in sig.predicates() {
            st.predicates.insert(p.to_string(), Table::filled(n, size, TruthValue::False));
        }
        Ok(st)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_element(&self, e: usize) -> Result<(), StructureError> {
        if e < self.size {
            Ok(())
        } else {
            Err(StructureError::OutOfDomain(e))
        }
    }

    fn check_tuple(&self, name: &str, arity: usize, tuple: &[usize]) -> Result<(), StructureError> {
        if tuple.len() != arity {
            return Err(StructureError::Arity { name: name.to_string(), expected: arity, found: tuple.len() });
        }
        tuple.iter().try_for_each(|&e| self.check_element(e))
    }

    pub fn set_constant(&mut self, name: &str, element: usize) -> Result<(), StructureError> {
        self.check_element(element)?;
        self.constants.insert(name.to_string(), element);
        Ok(())
    }

    pub fn set_function(&mut self, name: &str, args: &[usize], value: usize) -> Result<(), StructureError> {
        self.check_element(value)?;
        let size = self.size;
        let table = self
            .functions
            .entry(name.to_string())
            .or_insert_with(|| Table::filled(args.len(), size, 0));
        let arity = table.arity;
        if args.len() != arity || args.iter().any(|&e| e >= size) {
            return Err(StructureError::Arity { name: name.to_string(), expected: arity, found: args.len() });
        }
        table.values[tuple_index(args, size)] = value;
        Ok(())
    }

    pub fn set_proposition(&mut self, name: &str, value: TruthValue) {
        self.propositions.insert(name.to_string(), value);
    }

    /// Sets one predicate entry, creating the predicate (all `False`) if needed.
    pub fn set_predicate(&mut self, name: &str, args: &[usize], value: TruthValue) -> Result<(), StructureError> {
        let size = self.size;
        let arity = self
            .predicates
            .entry(name.to_string())
            .or_insert_with(|| Table::filled(args.len(), size, TruthValue::False))
            .arity;
        self.check_tuple(name, arity, args)?;
        self.predicates[name].values[tuple_index(args, size)] = value;
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) {
        let size = self.size;
        self.predicates
            .entry(name.to_string())
            .or_insert_with(|| Table::filled(arity, size, TruthValue::False));
    }

    pub fn set_equality(&mut self, lhs: usize, rhs: usize, value: TruthValue) -> Result<(), StructureError> {
        self.check_element(lhs)?;
        self.check_element(rhs)?;
        if lhs == rhs && !value.is_designated() {
            return Err(StructureError::Diagonal(lhs));
        }
        self.equality[lhs * self.size + rhs] = value;
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.constants.iter().map(|(n, &e)| (n.as_str(), e))
    }

    pub fn function(&self, name: &str, args: &[usize]) -> Option<usize> {
        let table = self.functions.get(name)?;
        (table.arity == args.len() && args.iter().all(|&e| e < self.size))
            .then(|| table.values[tuple_index(args, self.size)])
    }

    pub fn proposition(&self, name: &str) -> Option<TruthValue> {
        self.propositions.get(name).copied()
    }

    pub fn predicate(&self, name: &str, args: &[usize]) -> Option<TruthValue> {
        let table = self.predicates.get(name)?;
        (table.arity == args.len() && args.iter().all(|&e| e < self.size))
            .then(|| table.values[tuple_index(args, self.size)])
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).map(|t| t.arity)
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.predicates.keys().map(String::as_str)
    }

    /// All `(tuple, value)` entries of a predicate, tuples in lexicographic order.
    pub fn predicate_entries(&self, name: &str) -> Vec<(Vec<usize>, TruthValue)> {
        match self.predicates.get(name) {
            None => Vec::new(),
            Some(t) => t
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| (index_tuple(i, t.arity, self.size), v))
                .collect(),
        }
    }

    pub fn equality(&self, lhs: usize, rhs: usize) -> TruthValue {
        self.equality[lhs * self.size + rhs]
    }

    /// Applies `f` to every predicate entry.
    pub fn map_predicates(&mut self, f: impl Fn(TruthValue) -> TruthValue) {
        for table in self.predicates.values_mut() {
            table.values.iter_mut().for_each(|v| *v = f(*v));
        }
    }

    /// Checks that every symbol of `sig` is interpreted with the declared
    /// arity and that equality is designated on the diagonal.
    pub fn check_signature(&self, sig: &Signature) -> Result<(), StructureError> {
        for d in 0..self.size {
            if !self.equality(d, d).is_designated() {
                return Err(StructureError::Diagonal(d));
            }
        }
        let uninterpreted = |n: &str| StructureError::Uninterpreted(n.to_string());
        for c in sig.constants() {
            self.constants.get(c).ok_or_else(|| uninterpreted(c))?;
        }
        for (f, n) in sig.functions() {
            let t = self.functions.get(f).ok_or_else(|| uninterpreted(f))?;
            if t.arity != n {
                return Err(StructureError::Arity { name: f.to_string(), expected: n, found: t.arity });
            }
        }
        for p in sig.propositions() {
            self.propositions.get(p).ok_or_else(|| uninterpreted(p))?;
        }
        for (p, n) in sig.predicates() {
            let t = self.predicates.get(p).ok_or_else(|| uninterpreted(p))?;
            if t.arity != n {
                return Err(StructureError::Arity { name: p.to_string(), expected: n, found: t.arity });
            }
        }
        Ok(())
    }

    pub(crate) fn interprets(&self, name: &str, symbol: Symbol) -> bool {
        match symbol {
            Symbol::Constant => self.constants.contains_key(name),
            Symbol::Function(n) => self.functions.get(name).is_some_and(|t| t.arity == n),
            Symbol::Proposition => self.propositions.contains_key(name),
            Symbol::Predicate(n) => self.predicates.get(name).is_some_and(|t| t.arity == n),
        }
    }
}

/// Values for finitely many variables; every other variable gets `default`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<String, usize>,
    default: usize,
}

impl Assignment {
    pub fn new(default: usize) -> Assignment {
        Assignment { values: BTreeMap::new(), default }
    }

    pub fn from_pairs<'a>(default: usize, pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Assignment {
        Assignment { values: pairs.into_iter().map(|(v, e)| (v.to_string(), e)).collect(), default }
    }

    /// The assignment `self(var -> element)`.
    pub fn with(&self, var: &str, element: usize) -> Assignment {
        let mut next = self.clone();
        next.values.insert(var.to_string(), element);
        next
    }

    pub fn get(&self, var: &str) -> usize {
        self.values.get(var).copied().unwrap_or(self.default)
    }

    pub fn default_element(&self) -> usize {
        self.default
    }

    /// Checks that the default and every mapped element lie in `st`'s domain.
    pub fn fits(&self, st: &Structure) -> bool {
        self.default < st.size() && self.values.values().all(|&e| e < st.size())
    }
}
