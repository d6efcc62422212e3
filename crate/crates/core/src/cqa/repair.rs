//! Repairs: fact bases consistent with the constraints whose difference from
//! the original basis is minimal under inclusion.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{answers_from, consistent_with, intersect, CqaError, Query, Tuple};
use crate::entailment::{Engine, EntailmentError, Mode};
use crate::relational::{
    canonical_model, collect_atom_ids, constraint_instances, relational_theory, FactBasis, GroundAtom,
    RelationalDatabase, RelationalLanguage,
};
use crate::semantics::{eval_formula, is_model, Assignment, TruthValue};
use crate::syntax::Formula;

/// Whether the symmetric difference of `base` and `l1` is included in that
/// of `base` and `l2`.
pub fn leq_lambda(base: &FactBasis, l1: &FactBasis, l2: &FactBasis) -> bool {
    base.symmetric_difference(l1).is_subset(&base.symmetric_difference(l2))
}

/// `consistent_with` in classical mode, decided on the canonical model: the
/// theory of `l` has that one classical model, so `l` is consistent exactly
/// when the model satisfies the constraints (or there are no atoms at all).
pub fn classically_consistent(lang: &RelationalLanguage, l: &FactBasis, constraints: &[Formula]) -> Result<bool, CqaError> {
    if lang.atom_count() == 0 {
        return Ok(true);
    }
    let st = canonical_model(lang, l);
    Ok(is_model(&st, constraints).map_err(crate::relational::RelationalError::from)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairOptions {
    pub max_diff: usize,
    /// Mode in which `consistent_with` decides provability.
    pub con_mode: Mode,
    /// Only insert atoms occurring in a constraint instance that the canonical
    /// model makes False.
    pub restrict_insertions: bool,
}

impl Default for RepairOptions {
    fn default() -> Self {
        RepairOptions { max_diff: 2, con_mode: Mode::Classical, restrict_insertions: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairSet {
    pub basis: FactBasis,
    pub deletions: Vec<GroundAtom>,
    pub insertions: Vec<GroundAtom>,
}

impl RepairSet {
    fn from_diff(lang: &RelationalLanguage, base: &FactBasis, diff: &[usize]) -> RepairSet {
        let (del, ins): (Vec<usize>, Vec<usize>) = diff.iter().partition(|&&id| base.contains_id(id));
        let ids = base.ids().iter().copied().filter(|id| !del.contains(id)).chain(ins.iter().copied());
        RepairSet {
            basis: FactBasis::from_ids(lang, ids),
            deletions: del.into_iter().map(|id| lang.atom(id)).collect(),
            insertions: ins.into_iter().map(|id| lang.atom(id)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairOutcome {
    /// In order of increasing difference size.
    pub repairs: Vec<RepairSet>,
    /// Candidate bases checked for consistency.
    pub examined: usize,
    /// Whether no repair with a larger difference exists.
    pub exhaustive: bool,
}

/// Incremental classical check: only instances that were False, or that
/// mention a changed atom, can change value.
struct ClassicalChecker {
    instances: Vec<(Formula, Vec<usize>)>,
    falsified: Vec<usize>,
    by_atom: Vec<Vec<usize>>,
}

impl ClassicalChecker {
    fn new(db: &RelationalDatabase) -> Result<ClassicalChecker, CqaError> {
        let lang = &db.language;
        let st = canonical_model(lang, &db.basis);
        let asg = Assignment::new(0);
        let mut instances = Vec::new();
        let mut falsified = Vec::new();
        let mut by_atom = vec![Vec::new(); lang.atom_count()];
        for inst in constraint_instances(db) {
            let f = inst.formula.expand_sugar();
            let mut ids = BTreeSet::new();
            let ground = crate::entailment::ground_formula(&f, lang).map_err(EntailmentError::from)?;
            collect_atom_ids(&ground, lang, &mut ids);
            let i = instances.len();
            for &id in &ids {
                by_atom[id].push(i);
            }
            if eval_formula(&st, &asg, &f).map_err(crate::relational::RelationalError::from)? == TruthValue::False {
                falsified.push(i);
            }
            instances.push((f, ids.into_iter().collect()));
        }
        Ok(ClassicalChecker { instances, falsified, by_atom })
    }

    fn check(&self, lang: &RelationalLanguage, candidate: &FactBasis, diff: &[usize]) -> Result<bool, CqaError> {
        if lang.atom_count() == 0 {
            return Ok(true);
        }
        // A False instance stays False unless the difference touches it.
        if self.falsified.iter().any(|&i| !self.instances[i].1.iter().any(|id| diff.contains(id))) {
            return Ok(false);
        }
        let mut todo: BTreeSet<usize> = self.falsified.iter().copied().collect();
        for &id in diff {
            todo.extend(&self.by_atom[id]);
        }
        let st = canonical_model(lang, candidate);
        let asg = Assignment::new(0);
        for i in todo {
            if eval_formula(&st, &asg, &self.instances[i].0).map_err(crate::relational::RelationalError::from)?
                == TruthValue::False
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lexicographic k-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Enumerates candidate differences by increasing size up to
/// `options.max_diff`, skipping supersets of differences already found
/// consistent, so every returned basis is a repair.
pub fn repairs(db: &RelationalDatabase, options: &RepairOptions) -> Result<RepairOutcome, CqaError> {
    let lang = &db.language;
    let constraints = db.expanded_constraints();
    let classical = match options.con_mode {
        Mode::Classical => Some(ClassicalChecker::new(db)?),
        Mode::Paraconsistent => None,
    };
    let universe: Vec<usize> = if options.restrict_insertions {
        let mut ids: BTreeSet<usize> = db.basis.ids().iter().copied().collect();
        let st = canonical_model(lang, &db.basis);
        for inst in crate::relational::falsified_instances(db, &st)? {
            collect_atom_ids(&inst.formula, lang, &mut ids);
        }
        ids.into_iter().collect()
    } else {
        (0..lang.atom_count()).collect()
    };

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    let mut examined = 0;
    for k in 0..=options.max_diff.min(universe.len()) {
        for combo in combinations(universe.len(), k) {
            let diff: Vec<usize> = combo.iter().map(|&i| universe[i]).collect();
            if found.iter().any(|f| f.iter().all(|id| diff.contains(id))) {
                continue;
            }
            examined += 1;
            let repair = RepairSet::from_diff(lang, &db.basis, &diff);
            let ok = match &classical {
                Some(checker) => checker.check(lang, &repair.basis, &diff)?,
                None => consistent_with(lang, &repair.basis, &constraints, options.con_mode)?,
            };
            if ok {
                found.push(diff);
                out.push(repair);
            }
        }
    }
    if out.is_empty() {
        return Err(CqaError::BoundExhausted { max_diff: options.max_diff, examined });
    }
    let exhaustive = found.iter().any(Vec::is_empty)
        || (!options.restrict_insertions && options.max_diff >= universe.len())
        || (options.con_mode == Mode::Classical && !larger_repair_exists(db, &constraints, &found)?);
    Ok(RepairOutcome { repairs: out, examined, exhaustive })
}

/// Whether some classically consistent basis has a difference containing none
/// of `found`. If not, every repair has one of `found` as its difference.
fn larger_repair_exists(db: &RelationalDatabase, constraints: &[Formula], found: &[Vec<usize>]) -> Result<bool, CqaError> {
    let lang = &db.language;
    let mut premises = constraints.to_vec();
    for diff in found {
        let keep = diff.iter().map(|&id| {
            let atom = lang.atom(id).to_formula();
            if db.basis.contains_id(id) {
                atom
            } else {
                atom.negate()
            }
        });
        premises.push(Formula::disjunction(keep));
    }
    Ok(Engine::new(lang, &premises, Mode::Classical)?.is_satisfiable())
}

/// Tuples that are answers with respect to every repair.
pub fn strongly_consistent_answers(db: &RelationalDatabase, q: &Query, options: &RepairOptions) -> Result<Vec<Tuple>, CqaError> {
    let outcome = repairs(db, options)?;
    if !outcome.exhaustive {
        return Err(CqaError::IncompleteRepairs { max_diff: options.max_diff });
    }
    let mut per_repair = Vec::new();
    for r in &outcome.repairs {
        per_repair.push(answers_from(&db.language, &relational_theory(&db.language, &r.basis), q)?);
    }
    Ok(intersect(per_repair.iter()))
}
