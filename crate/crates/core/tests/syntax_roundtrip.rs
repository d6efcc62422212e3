mod common;

use common::Vocabulary;
use paracqa::syntax::{parse_formula, substitute, Formula, Term};
use proptest::prelude::*;

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
        prop::sample::select(vec!["x", "y", "z", "x'"]).prop_map(Term::var),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::App("f".into(), vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Term::App("g".into(), vec![l, r])),
        ]
    })
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Falsum),
        Just(Formula::Top),
        prop::sample::select(vec!["p", "q"]).prop_map(|p| Formula::Prop(p.into())),
        term_strategy().prop_map(|t| Formula::pred("P", vec![t])),
        (term_strategy(), term_strategy()).prop_map(|(l, r)| Formula::pred("R", vec![l, r])),
        (term_strategy(), term_strategy()).prop_map(|(l, r)| Formula::eq(l, r)),
    ];
    let var = prop::sample::select(vec!["x", "y", "z"]);
    leaf.prop_recursive(5, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            inner.clone().prop_map(Formula::cons),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.strong_implies(b)),
            (var.clone(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            (var.clone(), inner).prop_map(|(x, a)| Formula::exists(x, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(f in formula_strategy()) {
        let sig = Vocabulary::rich().signature();
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text, &sig).unwrap(), f);
    }

    #[test]
    fn printing_is_stable(f in formula_strategy()) {
        let sig = Vocabulary::rich().signature();
        let once = f.to_string();
        prop_assert_eq!(parse_formula(&once, &sig).unwrap().to_string(), once);
    }

    #[test]
    fn substitution_of_closed_term_removes_variable(f in formula_strategy(), x in prop::sample::select(vec!["x", "y", "z"])) {
        let g = substitute(&f, x, &Term::constant("a"));
        prop_assert!(!g.free_variables().contains(x));
        let mut expected = f.free_variables();
        expected.remove(x);
        prop_assert_eq!(g.free_variables(), expected);
    }

    #[test]
    fn sugar_expansion_is_sugar_free(f in formula_strategy()) {
        let e = f.expand_sugar();
        prop_assert!(e.is_sugar_free());
        prop_assert_eq!(e.free_variables(), f.free_variables());
    }
}

#[test]
fn seeded_generator_round_trip() {
    let voc = Vocabulary::rich();
    let sig = voc.signature();
    let mut rng = common::rng(11);
    for _ in 0..2000 {
        let f = voc.formula(&mut rng, 5);
        assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f, "{f}");
    }
}

#[test]
fn capture_is_avoided() {
    let sig = Vocabulary::rich().signature();
    let f = parse_formula("forall y. R(x, y)", &sig).unwrap();
    let g = substitute(&f, "x", &Term::var("y"));
    assert_eq!(g.to_string(), "forall y'. R(y,y')");
}
