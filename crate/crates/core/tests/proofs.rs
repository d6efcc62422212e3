//! Hand-written proof files, soundness of the bounded prover against the
//! semantic oracles, and the comparison between the equality rules and the
//! equality axioms.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use common::{random_sequent, rng, Vocabulary};
use paracqa::entailment::{decide_consequence, Mode};
use paracqa::relational::RelationalLanguage;
use paracqa::semantics::{consequence_bruteforce, eval_formula, is_model, Assignment, Structure, TruthValue};
use paracqa::sequent::{
    check_derivation, equality_axioms, parse_proof_file, prove_bounded, prove_with, RuleName, SearchConfig, Sequent,
};
use paracqa::syntax::{parse_formula, Formula};

fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fixtures(name: &str) -> Vec<(PathBuf, String)> {
    let mut out: Vec<_> = fs::read_dir(fixture_dir(name))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    out
}

#[test]
fn valid_fixtures_check() {
    let files = fixtures("proofs");
    assert!(files.len() >= 15, "only {} fixtures", files.len());
    for (path, text) in &files {
        let file = parse_proof_file(text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let hyps: Vec<Sequent> = file.derivation.hypotheses().into_iter().cloned().collect();
        if let Err(e) = check_derivation(&file.derivation, &hyps) {
            panic!("{}: {e}", path.display());
        }
    }
}

#[test]
fn fixtures_use_every_rule() {
    let mut used = BTreeSet::new();
    let mut classical_only = BTreeSet::new();
    for (_, text) in fixtures("proofs") {
        let file = parse_proof_file(&text).unwrap();
        let rules = file.derivation.rules();
        if file.derivation.mode == Mode::Classical {
            classical_only.extend(rules.iter().copied());
        }
        used.extend(rules);
    }
    let missing: Vec<_> = RuleName::ALL.iter().filter(|r| !used.contains(r)).collect();
    assert!(missing.is_empty(), "rules without a fixture: {missing:?}");
    assert!(classical_only.contains(&RuleName::NotL));
}

#[test]
fn invalid_fixtures_are_rejected_for_the_stated_reason() {
    let files = fixtures("invalid");
    assert!(files.len() >= 5);
    for (path, text) in &files {
        let expect = text
            .lines()
            .find_map(|l| l.strip_prefix("# expect: "))
            .unwrap_or_else(|| panic!("{} lacks an expect line", path.display()));
        let file = parse_proof_file(text).unwrap();
        let hyps: Vec<Sequent> = file.derivation.hypotheses().into_iter().cloned().collect();
        let err = check_derivation(&file.derivation, &hyps).expect_err(&path.display().to_string());
        assert!(err.to_string().contains(expect), "{}: {err}", path.display());
    }
}

#[test]
fn fixtures_survive_printing() {
    for (path, text) in fixtures("proofs") {
        let file = parse_proof_file(&text).unwrap();
        let again = parse_proof_file(&file.to_text()).unwrap();
        assert_eq!(file.derivation, again.derivation, "{}", path.display());
    }
}

#[test]
fn hand_written_proofs_are_valid_consequences() {
    for (path, text) in fixtures("proofs") {
        let file = parse_proof_file(&text).unwrap();
        if !file.derivation.hypotheses().is_empty() {
            continue;
        }
        let lang = RelationalLanguage::new(file.signature.clone()).unwrap();
        let goal = file.derivation.conclusion().unwrap();
        let gamma: Vec<Formula> = goal.antecedent.iter().cloned().collect();
        let delta: Vec<Formula> = goal.succedent.iter().cloned().collect();
        assert!(
            decide_consequence(&lang, &gamma, &delta, file.derivation.mode).unwrap(),
            "{}",
            path.display()
        );
    }
}

#[test]
fn found_proofs_are_sound() {
    let voc = Vocabulary::relational(&["a", "b"], &[("P", 1), ("R", 2)]);
    let lang = voc.language();
    let mut rng = rng(0x5eed);
    let (mut found, mut tried) = (0, 0);
    while found < 200 {
        tried += 1;
        assert!(tried < 20_000, "only {found} proofs in {tried} attempts");
        let goal = random_sequent(&voc, &mut rng);
        let Some(proof) = prove_bounded(&goal, 4, &lang, Mode::Paraconsistent) else {
            continue;
        };
        found += 1;
        assert!(check_derivation(&proof, &[]).is_ok());
        assert_eq!(proof.conclusion(), Some(&goal));
        let gamma: Vec<Formula> = goal.antecedent.iter().cloned().collect();
        let delta: Vec<Formula> = goal.succedent.iter().cloned().collect();
        assert!(decide_consequence(&lang, &gamma, &delta, Mode::Paraconsistent).unwrap(), "{goal}");
        assert!(consequence_bruteforce(&lang, &gamma, &delta).unwrap(), "{goal}");
    }
}

#[test]
fn found_classical_proofs_are_classically_sound() {
    let voc = Vocabulary::relational(&["a", "b"], &[("P", 1), ("Q", 1)]);
    let lang = voc.language();
    let mut rng = rng(77);
    let mut found = 0;
    for _ in 0..3000 {
        let goal = random_sequent(&voc, &mut rng);
        if let Some(proof) = prove_bounded(&goal, 3, &lang, Mode::Classical) {
            found += 1;
            assert!(check_derivation(&proof, &[]).is_ok());
            let gamma: Vec<Formula> = goal.antecedent.iter().cloned().collect();
            let delta: Vec<Formula> = goal.succedent.iter().cloned().collect();
            assert!(decide_consequence(&lang, &gamma, &delta, Mode::Classical).unwrap(), "{goal}");
        }
    }
    assert!(found >= 100, "{found}");
}

fn lang_ab() -> RelationalLanguage {
    RelationalLanguage::from_parts(["a", "b"], [("P", 1), ("R", 2)]).unwrap()
}

fn sequent(text: &str) -> Sequent {
    Sequent::parse(text, lang_ab().signature()).unwrap()
}

fn with_axioms(goal: &Sequent) -> Sequent {
    let sig = lang_ab().signature().clone();
    Sequent::new(goal.antecedent.iter().cloned().chain(equality_axioms(&sig)), goal.succedent.iter().cloned())
}

fn axiom_config() -> SearchConfig {
    let mut config = SearchConfig::for_language(&lang_ab(), Mode::Paraconsistent);
    config.equality_rules = false;
    config
}

#[test]
fn equality_rules_and_axioms_agree_on_forward_replacement() {
    let cases = [
        "a = b, P(a) |- P(b)",
        "|- a = a",
        "|- forall x. x = x",
        "a = b, P(a) |- P(b) | P(a)",
        "b = a, P(b) |- P(a)",
    ];
    let lang = lang_ab();
    for case in cases {
        let goal = sequent(case);
        assert!(prove_bounded(&goal, 6, &lang, Mode::Paraconsistent).is_some(), "{case} with rules");
        let proof = prove_with(&with_axioms(&goal), 6, &axiom_config());
        let proof = proof.unwrap_or_else(|| panic!("{case} from the axioms"));
        let rules = proof.rules();
        assert!(!rules.contains(&RuleName::EqRefl) && !rules.contains(&RuleName::EqRepl));
    }
}

/// Two elements, `a` and `b` apart, with `a = b` true but `b = a` false and
/// every other pair classical.
fn lopsided_equality() -> Structure {
    let mut st = Structure::for_signature(lang_ab().signature(), 2).unwrap();
    st.set_constant("a", 0).unwrap();
    st.set_constant("b", 1).unwrap();
    st.set_equality(0, 1, TruthValue::True).unwrap();
    st.set_equality(1, 0, TruthValue::False).unwrap();
    st
}

#[test]
fn backward_replacement_needs_symmetry_the_axioms_lack() {
    let lang = lang_ab();
    let sig = lang.signature().clone();
    for (case, p_a, p_b) in [
        ("a = b, P(b) |- P(a)", TruthValue::False, TruthValue::True),
        ("a = b, ~P(b) |- ~P(a)", TruthValue::True, TruthValue::Both),
        ("a = b |- b = a", TruthValue::False, TruthValue::False),
    ] {
        let goal = sequent(case);
        assert!(prove_bounded(&goal, 4, &lang, Mode::Paraconsistent).is_some(), "{case}");
        assert!(prove_with(&with_axioms(&goal), 5, &axiom_config()).is_none(), "{case}");

        let mut st = lopsided_equality();
        st.set_predicate("P", &[0], p_a).unwrap();
        st.set_predicate("P", &[1], p_b).unwrap();
        let gamma: Vec<Formula> = goal.antecedent.iter().cloned().chain(equality_axioms(&sig)).collect();
        assert!(is_model(&st, &gamma).unwrap(), "{case}");
        for d in &goal.succedent {
            assert_eq!(eval_formula(&st, &Assignment::new(0), d).unwrap(), TruthValue::False, "{case}");
        }
    }
}

#[test]
fn replacement_is_sound_when_equality_is_crisp() {
    let lang = lang_ab();
    for case in ["a = b, P(b) |- P(a)", "a = b, ~P(b) |- ~P(a)", "a = b |- b = a"] {
        let goal = sequent(case);
        let gamma: Vec<Formula> = goal.antecedent.iter().cloned().collect();
        let delta: Vec<Formula> = goal.succedent.iter().cloned().collect();
        assert!(consequence_bruteforce(&lang, &gamma, &delta).unwrap(), "{case}");
    }
    let f = parse_formula("a = b", lang.signature()).unwrap();
    assert!(consequence_bruteforce(&lang, &[f], &[]).unwrap());
}
