//! End-to-end runs of the binary on the example databases.

use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn db(n: usize) -> String {
    root().join(format!("databases/ex{n}.pdb")).display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn paracqa(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_paracqa")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

const Q3: &str = "y | exists x, z. P(x,y,z)";

#[test]
fn plain_answers() {
    for (n, q, want) in [(1, "x | P(x)", "(a)\n(b)\n"), (2, "x | P(x)", "(a)\n(b)\n"), (3, Q3, "(b)\n(c)\n(f)\n")] {
        let r = paracqa(&["answers", "--db", &db(n), q]);
        assert_eq!((r.code, r.stdout.as_str()), (0, want), "Ex{n}");
    }
}

#[test]
fn strong_answers() {
    for (n, q, want) in [(1, "x | P(x)", "(b)\n"), (2, "x | P(x)", "(a)\n"), (3, Q3, "(f)\n")] {
        let r = paracqa(&["answers", "--db", &db(n), "--mode", "strong", q]);
        assert_eq!((r.code, r.stdout.as_str()), (0, want), "Ex{n}");
    }
}

#[test]
fn consistent_answers_name_their_variant() {
    let r = paracqa(&["answers", "--db", &db(1), "--mode", "consistent", "x | P(x)"]);
    assert_eq!(r.stdout, "(b)\n");
    assert!(r.stderr.contains("blame variant"));
    let r = paracqa(&["answers", "--db", &db(1), "--mode", "consistent", "--variant", "literal", "x | P(x)"]);
    assert_eq!(r.stdout, "");
    assert!(r.stderr.contains("literal variant"));
    let r = paracqa(&["answers", "--db", &db(3), "--mode", "consistent", "--variant", "literal", Q3]);
    assert_eq!(r.stdout, "(b)\n(c)\n(f)\n");
}

#[test]
fn explain_shows_the_clean_set() {
    let r = paracqa(&["answers", "--db", &db(1), "--mode", "consistent", "--explain", "x | P(x)"]);
    assert_eq!(
        r.stdout,
        "# clean facts: {P(b), ~Q(b)}\n# theory plus constraints has a three-valued model\n(b)\n"
    );
    let r = paracqa(&["answers", "--db", &db(2), "--mode", "consistent", "--explain", "x | P(x)"]);
    assert!(r.stdout.contains("has no three-valued model"));
}

#[test]
fn json_report() {
    let r = paracqa(&["answers", "--db", &db(1), "--mode", "strong", "--format", "json", "x | P(x)"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["answers"], serde_json::json!([["b"]]));
    assert_eq!(v["kind"], "strong");
}

#[test]
fn repairs_listing() {
    let r = paracqa(&["repairs", "--db", &db(1)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "repair 1: {P(b), Q(a)}\n  delete P(a)\n\nrepair 2: {P(a), P(b)}\n  delete Q(a)\n");
    assert!(r.stderr.contains("no other repairs exist"));
    let r = paracqa(&["repairs", "--db", &db(2)]);
    assert!(r.stdout.contains("  insert Q(b)"));
}

#[test]
fn consistency_check() {
    let r = paracqa(&["check", "--db", &db(1)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "inconsistent\n  constraint 1 violated: ~(P(a) & Q(a))\n");
}

#[test]
fn deciding_consequence() {
    let with_all = ["decide", "--db", &db(1), "--with-theory", "--with-constraints"];
    let r = paracqa(&[&with_all[..], &["|- Q(b)"]].concat());
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("not valid; countermodel:\n"));
    assert!(r.stdout.contains("Q(b)=False"));
    let r = paracqa(&[&with_all[..], &["--mode", "classical", "|- Q(b)"]].concat());
    assert_eq!((r.code, r.stdout.as_str()), (0, "valid\n"));
}

#[test]
fn prove_then_check() {
    let r = paracqa(&["prove", "--constants", "a,b", "--predicates", "P/1", "--depth", "4", "a = b, P(a) |- P(b)"]);
    assert_eq!(r.code, 0);
    let path = std::env::temp_dir().join(format!("paracqa-cli-{}.proof", std::process::id()));
    std::fs::write(&path, &r.stdout).unwrap();
    let c = paracqa(&["check-proof", &path.display().to_string()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!((c.code, c.stdout.as_str()), (0, "proof of P(a), a = b |- P(b) checked (4 steps, lp)\n"));
}

#[test]
fn unproved_goal_exits_with_bound_code() {
    let r = paracqa(&["prove", "--constants", "a", "--predicates", "P/1", "--depth", "3", "|- P(a)"]);
    assert_eq!(r.code, 3);
}

#[test]
fn rejected_fixture() {
    let path = root().join("crates/core/tests/fixtures/invalid/classical_rule_in_lp.proof");
    let r = paracqa(&["check-proof", &path.display().to_string()]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "rejected: step 2: classical-only rule not-L used in a paraconsistent derivation\n");
}

#[test]
fn usage_errors() {
    assert_eq!(paracqa(&["bogus"]).code, 2);
    assert_eq!(paracqa(&["answers", "--db", &db(1), "x | Q(y)"]).code, 2);
    assert_eq!(paracqa(&["answers", "--db", "/nonexistent.pdb", "x | P(x)"]).code, 2);
}

#[test]
fn truth_tables() {
    let r = paracqa(&["truth-tables"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("-> | t b f\n---+------\nt  | t b f\nb  | t b f\nf  | t t t\n"), "{}", r.stdout);
}

#[test]
fn too_small_bound_is_reported() {
    let r = paracqa(&["answers", "--db", &db(3), "--mode", "strong", "--max-diff", "1", Q3]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("raise the bound"));
}
