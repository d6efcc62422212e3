//! Exhaustive consequence checking over every relational structure of a tiny
//! language. Independent of grounding and the signed encoding; it only uses
//! [`eval_formula`](super::eval_formula).

use thiserror::Error;

use super::{assignments_over, eval_formula, index_tuple, Assignment, EvalError, Structure, TruthValue};
use crate::entailment::Mode;
use crate::relational::RelationalLanguage;
use crate::syntax::{free_variables_of, Formula};

/// Largest number of ground atoms the oracle enumerates (3^10 structures).
pub const ORACLE_MAX_ATOMS: usize = 10;
/// Largest number of assignments to free variables per structure.
pub const ORACLE_MAX_ASSIGNMENTS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("language has {0} ground atoms; the oracle is limited to {ORACLE_MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("{0} assignments to free variables exceed the oracle limit of {ORACLE_MAX_ASSIGNMENTS}")]
    TooManyAssignments(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `gamma |= delta` over all relational structures for `lang`, three-valued.
pub fn consequence_bruteforce(
    lang: &RelationalLanguage,
    gamma: &[Formula],
    delta: &[Formula],
) -> Result<bool, OracleError> {
    Ok(find_countermodel_bruteforce(lang, gamma, delta, Mode::Paraconsistent)?.is_none())
}

/// First structure and assignment (in enumeration order) that designates all
/// of `gamma` and falsifies all of `delta`. In classical mode predicate
/// entries range over `{True, False}` only.
pub fn find_countermodel_bruteforce(
    lang: &RelationalLanguage,
    gamma: &[Formula],
    delta: &[Formula],
    mode: Mode,
) -> Result<Option<(Structure, Assignment)>, OracleError> {
    let atoms = lang.atoms();
    if atoms.len() > ORACLE_MAX_ATOMS {
        return Err(OracleError::TooManyAtoms(atoms.len()));
    }
    let size = lang.constant_count();
    let vars = free_variables_of(gamma.iter().chain(delta));
    let n_asg = size.checked_pow(vars.len() as u32).unwrap_or(usize::MAX);
    if n_asg > ORACLE_MAX_ASSIGNMENTS {
        return Err(OracleError::TooManyAssignments(n_asg));
    }
    let values: &[TruthValue] = match mode {
        Mode::Paraconsistent => &TruthValue::ALL,
        Mode::Classical => &TruthValue::CLASSICAL,
    };
    let assignments: Vec<Assignment> = assignments_over(&vars, size).collect();
    let mut st = lang.blank_structure();
    let total = values.len().pow(atoms.len() as u32);
    for code in 0..total {
        for (atom, digit) in atoms.iter().zip(index_tuple(code, atoms.len(), values.len())) {
            let args = lang.atom_elements(atom);
            st.set_predicate(&atom.predicate, &args, values[digit])
                .expect("atoms come from the language");
        }
        for asg in &assignments {
            if is_countermodel(&st, asg, gamma, delta)? {
                return Ok(Some((st, asg.clone())));
            }
        }
    }
    Ok(None)
}

fn is_countermodel(st: &Structure, asg: &Assignment, gamma: &[Formula], delta: &[Formula]) -> Result<bool, EvalError> {
    for g in gamma {
        if !eval_formula(st, asg, g)?.is_designated() {
            return Ok(false);
        }
    }
    for d in delta {
        if eval_formula(st, asg, d)?.is_designated() {
            return Ok(false);
        }
    }
    Ok(true)
}
