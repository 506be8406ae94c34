use std::process::{Command, Output};

use serde_json::Value;
use stickel_cli::document::BasisDocument;

fn stick(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stick"))
        .args(args)
        .env_remove("STICK_THREADS")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn basis_json_for_five() {
    let o = stick(&["basis", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = BasisDocument::from_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let supports: Vec<Vec<u64>> = doc.elements.iter().map(|r| r.support.clone()).collect();
    assert_eq!(supports, vec![vec![1, 2], vec![1, 3], vec![1, 2, 3, 4]]);
}

#[test]
fn basis_text_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.txt");
    let o = stick(&[
        "basis",
        "5",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(path).unwrap(),
        "b=1: {1,2}\nb=2: {1,3}\nb=0: {1,2,3,4}\n"
    );
}

#[test]
fn hminus_both_methods() {
    let o = stick(&["hminus", "23", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["det"], 3);
    assert_eq!(v["analytic"], 3);
    assert_eq!(v["agree"], true);
    let single = json(&stick(&["hminus", "39", "--method", "analytic"]));
    assert_eq!(single, serde_json::json!({ "analytic": 2 }));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["hminus", "6"][..],
        &["basis", "1"],
        &["jacobi", "5", "5"],
        &["hminus", "x"],
        &["nonsense"],
    ] {
        let o = stick(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_stick"))
        .args(["bound", "5"])
        .env("STICK_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_every_check() {
    let o = stick(&["verify", "21", "--deep"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS m=21 ")).count(),
        9
    );
    assert!(!text.contains("FAIL"));
}

#[test]
fn bound_is_exact_and_decimal() {
    let v = json(&stick(&["bound", "23"]));
    assert_eq!(v["exact"], "161051/512*sqrt(11/4)");
    assert!(v["decimal"].as_str().unwrap().starts_with("521.626698351"));
}

#[test]
fn jacobi_generators_verify() {
    let o = stick(&["jacobi", "5", "11", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["q"], 11);
    assert_eq!(v["method"], "enumeration");
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 2);
    assert!(gens.iter().all(|g| g["verification"]["passed"] == true));

    // 37 has order 36 modulo 2: only the l-adic route reaches this field
    let o = Command::new(env!("CARGO_BIN_EXE_stick"))
        .args(["jacobi", "37", "2", "--b", "1", "--verify"])
        .env("STICK_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["method"], "l-adic");
    assert_eq!(v["f"], 36);
    assert_eq!(v["generators"][0]["verification"]["passed"], true);
}

#[test]
fn bench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = stick(&[
        "bench",
        "--min",
        "3",
        "--max",
        "12",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("not reproducible"));
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,factorization,phi,time_analytic_s,time_det_s,h_minus")
    );
    let ms: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ms, vec!["3", "4", "5", "7", "8", "9", "11", "12"]);
}
