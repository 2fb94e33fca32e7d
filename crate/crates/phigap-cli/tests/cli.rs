//! End-to-end checks of the binary: exit codes, determinism, and the JSON
//! surfaces.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phigap"))
}

fn write_fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("phigap-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn analyze_prints_invariants() {
    let path = write_fixture(
        "ex5.quiver",
        "quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }",
    );
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("phidim: 2"));
    assert!(text.contains("self-injective: no"));
}

#[test]
fn analyze_json_input_and_output() {
    let path = write_fixture(
        "loop.json",
        r#"{"name": "L", "vertices": ["1"], "arrows": [{"source": "1", "target": "1"}]}"#,
    );
    let out = run(&["analyze", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["phidim"], 0);
    assert_eq!(json["self_injective"], true);
}

#[test]
fn parse_error_exits_two() {
    let path = write_fixture("bad.quiver", "quiver x { vertices: 1; arrows: 1 -> 2; }");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains('2'), "{err}");
}

#[test]
fn phi_command_multiplicity_invariance() {
    let path = write_fixture(
        "ex5b.quiver",
        "quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }",
    );
    let single = run(&["phi", path.to_str().unwrap(), "-m", "S(1)", "--json"]);
    let multiple = run(&["phi", path.to_str().unwrap(), "-m", "S(1)^5", "--json"]);
    assert!(single.status.success() && multiple.status.success());
    let a: serde_json::Value = serde_json::from_slice(&single.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&multiple.stdout).unwrap();
    assert_eq!(a["phi"]["phi"], b["phi"]["phi"]);
    assert_eq!(a["phi"]["phi"], 0);
}

#[test]
fn phi_unknown_vertex_exits_two() {
    let path = write_fixture("a2.quiver", "quiver a2 { vertices: 1 2; arrows: 1 -> 2; }");
    let out = run(&["phi", path.to_str().unwrap(), "-m", "S(9)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gaps_reports_schema_and_success() {
    let path = write_fixture("a2c.quiver", "quiver a2 { vertices: 1 2; arrows: 1 -> 2; }");
    let out = run(&["gaps", path.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["phidim"], 1);
    assert_eq!(json["gap_theorem_ok"], true);
    assert_eq!(json["values"]["0"]["status"], "ADMISSIBLE");
}

#[test]
fn time_budget_disables_exhaustiveness() {
    let path = write_fixture(
        "gap15.quiver",
        "quiver gap15 { vertices: 0 1 2 3 4 5 6 7 8 9 10 11 12 13 14; arrows: 0 -> 1; 0 -> 2; 1 -> 3; 2 -> 4; 3 -> 5; 4 -> 6; 5 -> 7; 6 -> 8; 7 -> 9; 7 -> 2; 8 -> 10; 8 -> 1; 9 -> 11; 10 -> 12; 11 -> 13; 11 -> 5; 12 -> 14; 12 -> 6; 13 -> 0; 14 -> 0; }",
    );
    let out = bin()
        .args(["gaps", path.to_str().unwrap()])
        .env("PHIGAP_TIME_BUDGET", "0.001")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["exhaustive"], false);
}

#[test]
fn transform_compare_checks_inequalities() {
    let path = write_fixture(
        "ex5c.quiver",
        "quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }",
    );
    let out = run(&[
        "transform",
        path.to_str().unwrap(),
        "--op",
        "opposite",
        "--compare",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inequality: ok"));

    let out = run(&[
        "transform",
        path.to_str().unwrap(),
        "--op",
        "subquiver",
        "--keep",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_json_emits_quiver_json() {
    let path = write_fixture("a2d.quiver", "quiver a2 { vertices: 1 2; arrows: 1 -> 2; }");
    let out = run(&[
        "transform",
        path.to_str().unwrap(),
        "--op",
        "separated",
        "--json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(json["arrows"].as_array().unwrap().len(), 1);
}

#[test]
fn explore_is_byte_deterministic() {
    let out_a = std::env::temp_dir().join("phigap-cli-tests/explore-a.jsonl");
    let out_b = std::env::temp_dir().join("phigap-cli-tests/explore-b.jsonl");
    fs::create_dir_all(out_a.parent().unwrap()).unwrap();
    for path in [&out_a, &out_b] {
        let out = run(&[
            "explore",
            "--vertices",
            "5",
            "--arrows",
            "8",
            "--loops",
            "--samples",
            "25",
            "--seed",
            "42",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = fs::read(&out_a).unwrap();
    let b = fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 25);
}

#[test]
fn explore_zero_samples_outputs_nothing() {
    let out = run(&[
        "explore",
        "--vertices",
        "3",
        "--arrows",
        "2",
        "--samples",
        "0",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn regress_passes_and_prints_per_expectation_lines() {
    let out = run(&["regress"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS")));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
    assert!(text.contains("0 failures"));
}
