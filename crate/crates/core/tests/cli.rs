use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use synclcs::star::{pauli_magic_square_rep, rep_to_json};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_synclcs"))
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = bin().args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report, out)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn example(dir: &TempDir, name: &str) -> PathBuf {
    let p = dir.path().join(format!("{name}.json"));
    let (code, _, _) = run(&["examples", name, "--out", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn validate_verdicts() {
    let dir = TempDir::new().unwrap();
    let ms = example(&dir, "magic-square");
    let (code, r, _) = run(&["validate", s(&ms)]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"], "pass");
    assert_eq!(check(&r, "classical-solvability")["verdict"], "warn");

    let p6 = write(&dir, "p6.json", r#"{"p": 6, "A": [[1, 1]], "b": [0]}"#);
    let (code, r, _) = run(&["validate", s(&p6)]);
    assert_eq!(code, 2);
    assert_eq!(check(&r, "modulus-prime")["verdict"], "fail");

    let ragged = write(&dir, "ragged.json", r#"{"p": 2, "A": [[1, 1], [1]], "b": [0, 0]}"#);
    let (code, _, out) = run(&["validate", s(&ragged)]);
    assert_eq!(code, 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged"));

    let (code, _, _) = run(&["validate", "/nonexistent/system.json"]);
    assert_eq!(code, 3);

    let long_b = write(&dir, "longb.json", r#"{"p": 2, "A": [[1, 1, 0]], "b": [0, 0, 0]}"#);
    assert_eq!(run(&["validate", s(&long_b)]).0, 2);
    assert_eq!(run(&["analyze", s(&long_b)]).0, 2);
}

#[test]
fn analyze_reports_sizes() {
    let dir = TempDir::new().unwrap();
    let (code, r, _) = run(&["analyze", s(&example(&dir, "magic-square"))]);
    assert_eq!(code, 0);
    for row in r["data"]["rows"].as_array().unwrap() {
        assert_eq!(row["solutions"], 4);
    }
    assert_eq!(r["data"]["graph"]["vertices"], 24);
    assert_eq!(r["data"]["homogeneous_graph"]["vertices"], 24);

    let (_, r, _) = run(&["analyze", s(&example(&dir, "one-eq"))]);
    assert_eq!(r["data"]["rows"][0]["solutions"], 2);
    assert_eq!(r["data"]["graph"]["edges"], 1);

    let zero = write(&dir, "zero.json", r#"{"p": 2, "A": [[0, 0], [1, 1]], "b": [1, 0]}"#);
    let (code, r, _) = run(&["analyze", s(&zero)]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "zero-rows")["verdict"], "warn");
    assert_eq!(r["data"]["rows"][0]["solutions"], 0);
}

#[test]
fn solve_values() {
    let dir = TempDir::new().unwrap();
    let rules = dir.path().join("rules.json");
    let (code, r, _) = run(&["solve", s(&example(&dir, "magic-square")), "--rules", s(&rules)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["perfect"], false);
    assert_eq!(r["data"]["value"], "34/36");
    let table: Value = serde_json::from_str(&std::fs::read_to_string(&rules).unwrap()).unwrap();
    assert_eq!(table["losing_output"], table["outputs"].as_array().unwrap().len());

    let (_, r, _) = run(&["solve", s(&example(&dir, "p3-demo"))]);
    assert_eq!(r["data"]["perfect"], true);
    assert_eq!(r["data"]["value"], "1/1");

    let bad = write(&dir, "bad.json", r#"{"p": 2, "A": [[0]], "b": [1]}"#);
    let (code, r, _) = run(&["solve", s(&bad)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["value"], "0/1");
    assert_eq!(r["data"]["strategy"][0]["answer"], "other");

    let first = write(&dir, "first.json", r#"{"p": 2, "A": [[1, 1]], "b": [1]}"#);
    let (_, r, _) = run(&["solve", s(&first)]);
    assert_eq!(r["data"]["strategy"][0]["answer"], "(1,0)");
}

#[test]
fn graph_outputs() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("g.dot");
    let adj = dir.path().join("g.json");
    let (code, r, _) = run(&["graph", s(&example(&dir, "magic-square")), "--dot", s(&dot), "--adjacency", s(&adj)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["vertices"], 24);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("[label=").count(), 24);
    assert_eq!(text.matches(" -- ").count() as u64, r["data"]["edges"].as_u64().unwrap());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&adj).unwrap()).unwrap();
    assert_eq!(json["edges"].as_array().unwrap().len() as u64, r["data"]["edges"].as_u64().unwrap());

    let empty = write(&dir, "empty.json", r#"{"p": 2, "A": [[0, 0]], "b": [1]}"#);
    let (_, r, _) = run(&["graph", s(&empty), "--homogeneous", "--dot", s(&dot)]);
    assert_eq!(r["data"]["vertices"], 1);
    let (_, r, _) = run(&["graph", s(&empty), "--dot", s(&dot)]);
    assert_eq!(r["data"]["vertices"], 0);
    assert_eq!(std::fs::read_to_string(&dot).unwrap(), "graph G_Ab {\n}\n");
}

#[test]
fn iso_reports() {
    let dir = TempDir::new().unwrap();
    let (code, r, _) = run(&["iso", s(&example(&dir, "magic-square"))]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["isomorphic"], false);
    assert_eq!(r["data"]["search"]["exhausted"], true);

    let (_, r, _) = run(&["iso", s(&example(&dir, "one-eq"))]);
    assert_eq!(r["data"]["identity"], true);
    assert_eq!(check(&r, "translation-isomorphism-verified")["verdict"], "pass");

    let (_, r, _) = run(&["iso", s(&example(&dir, "p3-demo"))]);
    assert_eq!(r["data"]["isomorphic"], true);
    assert_eq!(check(&r, "search-isomorphism-verified")["verdict"], "pass");

    let out =
        bin().args(["iso", s(&example(&dir, "magic-square"))]).env("SYNCLCS_SEARCH_BUDGET", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(4));

    let out = bin().args(["analyze", s(&example(&dir, "magic-square"))]).env("SYNCLCS_ENUM_CAP", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn group_presentations() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("rel.txt");
    let (code, r, _) = run(&["group", s(&example(&dir, "magic-square")), "--format", "relators", "--out", s(&out)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["relations"], 43);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 43);
    assert!(text.lines().any(|l| l == "g3 g6 g9 J^-1"));

    let one = write(&dir, "one.json", r#"{"p": 2, "A": [[1, 1]], "b": [1]}"#);
    let (_, r, _) = run(&["group", s(&one)]);
    assert_eq!(r["data"]["relations"], 7);
    assert_eq!(r["data"]["presentation"]["relations"][6]["text"], "g1 g2 J^-1");

    let zero = write(&dir, "zero.json", r#"{"p": 2, "A": [[0, 0], [1, 1]], "b": [0, 0]}"#);
    let (_, r, _) = run(&["group", s(&zero), "--format", "relators", "--out", s(&out)]);
    assert_eq!(r["data"]["by_family"]["row-product"], 2);
    assert!(std::fs::read_to_string(&out).unwrap().lines().any(|l| l == "1"));
}

#[test]
fn repcheck_sources() {
    let dir = TempDir::new().unwrap();
    let ms = example(&dir, "magic-square");
    let (code, r, _) = run(&["repcheck", s(&ms), "--rep", "pauli-ms"]);
    assert_eq!(code, 0);
    assert_eq!(r["tolerance"], 1e-9);
    assert_eq!(r["data"]["relations"], 43);

    let p3 = example(&dir, "p3-demo");
    let (code, r, _) = run(&["repcheck", s(&p3), "--rep", "scalar:1,0,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["max_residual"], 0.0);
    assert_eq!(r["data"]["arithmetic"], "exact-cyclotomic");

    assert_eq!(run(&["repcheck", s(&p3), "--rep", "pauli-ms"]).0, 2);
    assert_eq!(run(&["repcheck", s(&p3), "--rep", "scalar:0,0,0"]).0, 2);
    assert_eq!(run(&["repcheck", s(&ms), "--rep", "scalar:auto"]).0, 2);

    let rep = pauli_magic_square_rep();
    let swapped = rep.clone().with_generator(1, rep.g(4).clone()).with_generator(4, rep.g(1).clone());
    let file = write(&dir, "swapped.json", &rep_to_json(&swapped));
    let (code, r, _) = run(&["repcheck", s(&ms), "--rep", s(&file)]);
    assert_eq!(code, 1);
    assert_eq!(r["summary"], "fail");
    assert_eq!(r["data"]["first_failure"], "relations/row-commutation");

    let good = write(&dir, "pauli.json", &rep_to_json(&rep));
    assert_eq!(run(&["repcheck", s(&ms), "--rep", s(&good)]).0, 0);

    let nonsquare = write(
        &dir,
        "ns.json",
        r#"{"p": 2, "dim": 2, "omega_convention": "exp(2*pi*i/p)", "generators": {"J": [[[-1, 0], [0, 0]]]}}"#,
    );
    assert_eq!(run(&["repcheck", s(&ms), "--rep", s(&nonsquare)]).0, 3);
}

#[test]
fn examples_and_report_flag() {
    let dir = TempDir::new().unwrap();
    let (code, r, _) = run(&["examples", "one-eq"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["system"]["A"], serde_json::json!([[1, 1]]));
    assert_eq!(run(&["examples", "nope"]).0, 3);

    let report = dir.path().join("r.json");
    let out = bin().args(["--report", s(&report), "examples", "p3-demo"]).output().unwrap();
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["command"], "examples");
    assert_eq!(r["omega_convention"], "exp(2*pi*i/p)");
}
