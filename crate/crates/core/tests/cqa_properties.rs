//! Invariants of answers, clean sets and repairs on random small databases.

mod common;

use std::collections::BTreeSet;

use common::{random_basis, random_database, rng, Vocabulary};
use paracqa::cqa::{
    answers, classically_consistent, clean_facts, consistent_answers, consistent_with, leq_lambda, repairs,
    strongly_consistent_answers, theory_satisfiable, CleanVariant, CqaError, Query, RepairOptions, Tuple,
};
use paracqa::entailment::Mode;
use paracqa::relational::{
    db_consistent, parse_database, semi_atoms, ConsistencyCheck, FactBasis, RelationalDatabase, SemiAtomicFact,
};
use rand::Rng;

fn vocabulary() -> Vocabulary {
    Vocabulary::relational(&["a", "b"], &[("P", 1), ("Q", 1)])
}

fn random_query(voc: &Vocabulary, rng: &mut impl Rng) -> Query {
    let body = voc.formula(rng, 2);
    let head: Vec<String> = body.free_variables().into_iter().collect();
    Query::new(head, body).unwrap()
}

/// Universe size is 4, so a bound of 4 makes every search exhaustive.
fn exhaustive() -> RepairOptions {
    RepairOptions { max_diff: 4, ..RepairOptions::default() }
}

/// Whether some basis satisfies the constraints classically.
fn repairable(db: &RelationalDatabase) -> bool {
    let lang = &db.language;
    (0..1usize << lang.atom_count()).any(|mask| {
        let l = FactBasis::from_ids(lang, (0..lang.atom_count()).filter(|i| mask >> i & 1 == 1));
        consistent_with(lang, &l, &db.constraints, Mode::Classical).unwrap()
    })
}

/// Samples whose constraints some basis satisfies; the others must report
/// an exhausted bound.
fn repairable_samples(count: usize, seed: u64) -> Vec<(RelationalDatabase, Query)> {
    let mut out = Vec::new();
    for (db, q) in samples(count, seed) {
        if repairable(&db) {
            out.push((db, q));
        } else {
            assert!(matches!(repairs(&db, &exhaustive()), Err(CqaError::BoundExhausted { .. })));
        }
    }
    assert!(out.len() * 2 >= count);
    out
}

fn set(tuples: Vec<Tuple>) -> BTreeSet<Tuple> {
    tuples.into_iter().collect()
}

fn samples(count: usize, seed: u64) -> Vec<(RelationalDatabase, Query)> {
    let voc = vocabulary();
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=2);
            let db = random_database(&mut rng, &voc, 4, n);
            let q = random_query(&voc, &mut rng);
            (db, q)
        })
        .collect()
}

#[test]
fn consistent_answers_are_answers() {
    for (db, q) in samples(150, 11) {
        let plain = set(answers(&db, &q).unwrap());
        for variant in [CleanVariant::Literal, CleanVariant::Blame] {
            let cons = set(consistent_answers(&db, &q, variant).unwrap());
            assert!(cons.is_subset(&plain), "{q} on {:?}", db.basis);
        }
    }
}

#[test]
fn clean_sets_are_consequences_of_the_basis() {
    for (db, _) in samples(100, 12) {
        let diagram: BTreeSet<SemiAtomicFact> = diagram(&db.basis, &db);
        for variant in [CleanVariant::Literal, CleanVariant::Blame] {
            let clean: BTreeSet<SemiAtomicFact> = clean_facts(&db, variant).unwrap().into_iter().collect();
            assert!(clean.is_subset(&diagram));
        }
    }
}

/// The semi-atomic facts true in the canonical model of `basis`.
fn diagram(basis: &FactBasis, db: &RelationalDatabase) -> BTreeSet<SemiAtomicFact> {
    semi_atoms(&db.language)
        .into_iter()
        .filter(|f| basis.contains(&f.atom) == f.positive)
        .collect()
}

#[test]
fn strong_answers_of_classically_consistent_databases_are_answers() {
    let mut seen = 0;
    for (db, q) in samples(200, 13) {
        if !db_consistent(&db, ConsistencyCheck::ClassicalSat).unwrap().consistent {
            continue;
        }
        seen += 1;
        let outcome = repairs(&db, &exhaustive()).unwrap();
        assert_eq!(outcome.repairs.len(), 1);
        assert_eq!(outcome.repairs[0].basis, db.basis);
        let plain = set(answers(&db, &q).unwrap());
        assert_eq!(set(strongly_consistent_answers(&db, &q, &exhaustive()).unwrap()), plain);
        let blame: BTreeSet<_> = clean_facts(&db, CleanVariant::Blame).unwrap().into_iter().collect();
        assert_eq!(blame, diagram(&db.basis, &db));
    }
    assert!(seen >= 20, "{seen}");
}

#[test]
fn negated_literals_are_weaker_than_completion() {
    // The literal ~P(a) leaves P(a) = Both open; the completion axiom does not.
    let db = parse_database("constants: a, b\npredicates: P/1\n").unwrap();
    let q = Query::parse("x | P(x) -> bot", db.language.signature()).unwrap();
    assert_eq!(answers(&db, &q).unwrap().len(), 2);
    assert!(consistent_answers(&db, &q, CleanVariant::Blame).unwrap().is_empty());
    let q = Query::parse("x | ~P(x)", db.language.signature()).unwrap();
    assert_eq!(consistent_answers(&db, &q, CleanVariant::Blame).unwrap(), answers(&db, &q).unwrap());
}

#[test]
fn insertion_repairs_can_add_strong_answers() {
    let db = parse_database("constants: a, b\npredicates: P/1\nconstraints:\nforall x. P(x)\n").unwrap();
    let q = Query::parse("x | P(x)", db.language.signature()).unwrap();
    assert!(answers(&db, &q).unwrap().is_empty());
    let strong = strongly_consistent_answers(&db, &q, &RepairOptions::default()).unwrap();
    assert_eq!(strong, vec![vec!["a".to_string()], vec!["b".to_string()]]);
}

#[test]
fn strong_answers_hold_in_every_repair() {
    for (db, q) in repairable_samples(80, 14) {
        let outcome = repairs(&db, &exhaustive()).unwrap();
        assert!(outcome.exhaustive);
        let strong = set(strongly_consistent_answers(&db, &q, &exhaustive()).unwrap());
        for r in &outcome.repairs {
            let per = set(answers(&db.with_basis(r.basis.clone()), &q).unwrap());
            assert!(strong.is_subset(&per));
        }
    }
}

#[test]
fn leq_is_a_preorder() {
    let lang = vocabulary().language();
    let mut rng = rng(15);
    for _ in 0..200 {
        let [base, l1, l2, l3] = [(); 4].map(|_| random_basis(&mut rng, &lang, 4));
        assert!(leq_lambda(&base, &l1, &l1));
        if leq_lambda(&base, &l1, &l2) && leq_lambda(&base, &l2, &l3) {
            assert!(leq_lambda(&base, &l1, &l3));
        }
        assert!(leq_lambda(&base, &base, &l2));
    }
}

fn subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..1usize << items.len()).map(move |mask| {
        items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect()
    })
}

#[test]
fn repairs_are_consistent_and_minimal() {
    for (db, _) in repairable_samples(80, 16) {
        let lang = &db.language;
        let outcome = repairs(&db, &exhaustive()).unwrap();
        assert!(!outcome.repairs.is_empty());
        for r in &outcome.repairs {
            assert!(consistent_with(lang, &r.basis, &db.constraints, Mode::Classical).unwrap());
            let diff: Vec<usize> = db.basis.symmetric_difference(&r.basis).into_iter().collect();
            for sub in subsets(&diff).filter(|s| s.len() < diff.len()) {
                let ids = (0..lang.atom_count()).filter(|id| db.basis.contains_id(*id) != sub.contains(id));
                let smaller = FactBasis::from_ids(lang, ids);
                assert!(!consistent_with(lang, &smaller, &db.constraints, Mode::Classical).unwrap());
            }
        }
        // No two repairs are comparable.
        for (i, r) in outcome.repairs.iter().enumerate() {
            for s in &outcome.repairs[i + 1..] {
                assert!(!leq_lambda(&db.basis, &r.basis, &s.basis) && !leq_lambda(&db.basis, &s.basis, &r.basis));
            }
        }
    }
}

#[test]
fn repairs_match_an_exhaustive_search() {
    for (db, _) in repairable_samples(60, 17) {
        let lang = &db.language;
        let consistent: Vec<FactBasis> = (0..1usize << lang.atom_count())
            .map(|mask| FactBasis::from_ids(lang, (0..lang.atom_count()).filter(|i| mask >> i & 1 == 1)))
            .filter(|l| consistent_with(lang, l, &db.constraints, Mode::Classical).unwrap())
            .collect();
        let minimal: BTreeSet<Vec<usize>> = consistent
            .iter()
            .filter(|l| !consistent.iter().any(|m| leq_lambda(&db.basis, m, l) && !leq_lambda(&db.basis, l, m)))
            .map(|l| l.ids().to_vec())
            .collect();
        let found: BTreeSet<Vec<usize>> =
            repairs(&db, &exhaustive()).unwrap().repairs.iter().map(|r| r.basis.ids().to_vec()).collect();
        assert_eq!(found, minimal, "{:?}", db.basis);
    }
}

#[test]
fn canonical_model_check_matches_classical_provability() {
    let voc = vocabulary();
    let lang = voc.language();
    let mut rng = rng(18);
    for _ in 0..150 {
        let constraints: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| voc.closed_formula(&mut rng, 3)).collect();
        let l = random_basis(&mut rng, &lang, 4);
        assert_eq!(
            classically_consistent(&lang, &l, &constraints).unwrap(),
            consistent_with(&lang, &l, &constraints, Mode::Classical).unwrap(),
        );
    }
}

#[test]
fn classical_consistency_implies_paraconsistent_consistency() {
    let voc = vocabulary();
    let lang = voc.language();
    let mut rng = rng(19);
    let (mut both, mut only_lp) = (0, 0);
    for _ in 0..150 {
        let constraints: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| voc.closed_formula(&mut rng, 3)).collect();
        let l = random_basis(&mut rng, &lang, 4);
        let classical = consistent_with(&lang, &l, &constraints, Mode::Classical).unwrap();
        let lp = consistent_with(&lang, &l, &constraints, Mode::Paraconsistent).unwrap();
        assert!(!classical || lp);
        both += usize::from(classical);
        only_lp += usize::from(lp && !classical);
    }
    assert!(both > 0 && only_lp > 0, "{both} {only_lp}");
}

#[test]
fn paraconsistent_con_can_still_reject_the_basis() {
    // Every model of theory and constraint makes P(a) Both, so ~P(a) follows.
    let db = parse_database("constants: a\npredicates: P/1\nfacts:\nP(a).\nconstraints:\n~P(a)\n").unwrap();
    assert!(theory_satisfiable(&db).unwrap());
    assert!(!consistent_with(&db.language, &db.basis, &db.constraints, Mode::Paraconsistent).unwrap());
}
