//! Models of relational theories, checked against brute-force enumeration of
//! every relational structure of a small language.

mod common;

use std::collections::BTreeSet;

use common::{random_basis, rng};
use paracqa::relational::{
    canonical_model, canonical_valuation, models_of_theory, nabla, relational_theory, theory_from_structure,
    FactBasis, RelationalLanguage,
};
use paracqa::semantics::{is_model, TruthValue};

/// Every assignment of the three values to `n` atoms.
fn valuations(n: usize) -> impl Iterator<Item = Vec<TruthValue>> {
    (0..3usize.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let v = TruthValue::ALL[code % 3];
                code /= 3;
                v
            })
            .collect()
    })
}

fn languages() -> Vec<RelationalLanguage> {
    vec![
        RelationalLanguage::from_parts(["a", "b"], [("P", 1), ("R", 2)]).unwrap(),
        RelationalLanguage::from_parts(["a", "b", "c"], [("P", 1), ("Q", 1)]).unwrap(),
        RelationalLanguage::from_parts(["a"], [("P", 1), ("Q", 1), ("R", 2)]).unwrap(),
    ]
}

fn random_bases(count: usize, seed: u64) -> Vec<(RelationalLanguage, FactBasis)> {
    let langs = languages();
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let lang = langs[i % langs.len()].clone();
            let basis = random_basis(&mut rng, &lang, 6);
            (lang, basis)
        })
        .collect()
}

#[test]
fn collapses_of_all_models_coincide() {
    for (lang, basis) in random_bases(120, 4) {
        assert!(basis.len() <= 6);
        let models = models_of_theory(&lang, &basis).unwrap();
        assert_eq!(models.len(), 1 << basis.len());
        let collapsed: BTreeSet<Vec<TruthValue>> = models
            .iter()
            .map(|m| canonical_valuation(&lang, &nabla(&lang, m).unwrap()).unwrap())
            .collect();
        assert_eq!(collapsed.len(), 1, "{basis:?}");
        let canonical = canonical_valuation(&lang, &canonical_model(&lang, &basis)).unwrap();
        assert!(collapsed.contains(&canonical));
    }
}

#[test]
fn canonical_model_determines_the_basis() {
    for (lang, basis) in random_bases(120, 5) {
        assert_eq!(theory_from_structure(&lang, &canonical_model(&lang, &basis)).unwrap(), basis);
        for m in models_of_theory(&lang, &basis).unwrap() {
            assert_eq!(theory_from_structure(&lang, &m).unwrap(), basis);
        }
    }
}

#[test]
fn models_agree_with_enumeration() {
    for (lang, basis) in random_bases(100, 6) {
        let theory = relational_theory(&lang, &basis);
        let atoms = lang.atoms();
        let brute: BTreeSet<Vec<TruthValue>> = valuations(atoms.len())
            .filter(|vals| {
                let st = lang.structure_from_values(atoms.iter().zip(vals.iter().copied()));
                is_model(&st, &theory).unwrap()
            })
            .collect();
        let listed: BTreeSet<Vec<TruthValue>> = models_of_theory(&lang, &basis)
            .unwrap()
            .iter()
            .map(|m| canonical_valuation(&lang, m).unwrap())
            .collect();
        assert_eq!(brute, listed, "{basis:?}");
    }
}
