use std::process::{Command, Output};

use serde_json::Value;

mod common;
use common::{example, truncated_monoid};

fn algen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algen")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = algen(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn budget_exhaustion_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("monoid.var");
    std::fs::write(&path, truncated_monoid(5)).unwrap();
    let p = path.to_str().unwrap();
    assert!(ok(&["validate", p]).contains("algebra W: 64 elements"));
    for args in [vec!["free", p, "3"], vec!["--budget", "100", "free", p, "1"]] {
        let out = algen(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with("error: budget exceeded"), "{err}");
    }
}

#[test]
fn parse_errors_point_at_the_offset() {
    let k = example("kleene.var");
    let out = algen(&["solve", k.to_str().unwrap(), "and(x,nor(x))"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err, "error: unknown operation `nor` at offset 6\n  and(x,nor(x))\n        ^\n");
}

#[test]
fn bad_variety_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.var");
    std::fs::write(&path, r#"{"name": "x", "signature": [{"name": "f", "arity": 1}], "algebras": []}"#).unwrap();
    let out = algen(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(algen(&["validate", "/nonexistent.var"]).status.code() == Some(1));
}

#[test]
fn solve_json_reports_unitary_kleene_problem() {
    let k = example("kleene.var");
    let out = ok(&["solve", k.to_str().unwrap(), "and(x,not(x))", "and(y,not(y))", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["type"], "unitary");
    assert_eq!(v["mcsg"][0]["term"], "and(z,not(z))");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(&keys[..4], ["variety", "terms", "variables", "bound"]);
}

#[test]
fn inconclusive_results_exit_with_3() {
    let n3 = example("n3.var");
    let out = algen(&["solve", n3.to_str().unwrap(), "plus(x,x)", "plus(y,y)"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout).unwrap().contains("type: inconclusive"));
    let props = ok(&["props", n3.to_str().unwrap()]);
    assert!(props.contains("1EP: no"));
}

#[test]
fn compare_and_lgg() {
    let b = example("boolean.var");
    let b = b.to_str().unwrap();
    assert!(ok(&["compare", b, "one", "z"]).starts_with("less"));
    assert!(ok(&["compare", b, "or(x,not(x))", "one"]).starts_with("equal"));
    let k = example("kleene.var");
    assert_eq!(ok(&["compare", k.to_str().unwrap(), "and(z,not(z))", "or(z,not(z))"]), "incomparable\n");
    assert_eq!(ok(&["lgg", "f(a,g(b))", "f(c,g(c))"]), "f(g1,g(g2))\n  f(a,g(b))  via {g1 -> a, g2 -> b}\n  f(c,g(c))  via {g1 -> c, g2 -> c}\n");
}

#[test]
fn kleene_dual_rejects_non_kleene_algebras() {
    let out = algen(&["kleene-dual", example("n3.var").to_str().unwrap(), "N3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not a Kleene algebra"));
    let out = algen(&["kleene-dual", example("kleene.var").to_str().unwrap(), "K9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn free_json_lists_representatives() {
    let out = ok(&["free", example("boolean.var").to_str().unwrap(), "2", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 16);
    assert_eq!(v["variables"], serde_json::json!(["x1", "x2"]));
}
