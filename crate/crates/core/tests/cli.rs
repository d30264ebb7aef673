use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enriques-bn")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn print_gram_is_bit_exact() {
    let out = run(&["lattice", "--print-gram"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0], "0 1 0 0 0 0 0 0 0 0");
    assert_eq!(rows[1], "1 0 0 0 0 0 0 0 0 0");
    assert_eq!(rows[2], "0 0 -2 0 1 0 0 0 0 0");
    assert_eq!(rows[5], "0 0 0 1 1 -2 1 0 0 0");
    assert_eq!(rows[9], "0 0 0 0 0 0 0 0 1 -2");
}

#[test]
fn config_echo_comes_first() {
    let out = run(&["--config", "i:2", "predict", "--class", "2E1+4E2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(r#"{"config":{"command":"predict","class":"2E1+4E2""#), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["config"]["configuration"], "config-i:2");
    assert_eq!(v["config"]["resolvedClass"]["coords"][1], 4);
}

#[test]
fn predict_rows() {
    let v = json(&["--config", "i:2", "predict", "--class", "2E1+4E2"]);
    assert_eq!(v["status"]["kind"], "Applies");
    assert_eq!((v["genus"].as_i64(), v["k"].as_i64()), (Some(9), Some(4)));
    let dims: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["predictedDim"].as_i64().unwrap()).collect();
    assert_eq!(dims, [0, 1]);
}

#[test]
fn predict_routes_hypothesis_failures() {
    let v = json(&["--config", "ii:2", "predict", "--class", "3E1+3E2"]);
    assert_eq!(v["status"]["kind"], "FailsHypothesis");
    assert_eq!(v["status"]["infinitePencils"], true);
    let v = json(&["--config", "i:2", "predict", "--class", "2E1+2E2"]);
    assert_eq!(v["status"]["kind"], "EmptyRange");
}

#[test]
fn invariants_of_three_b() {
    let v = json(&["--config", "ii:2", "invariants", "--class", "3E1+3E2"]);
    assert_eq!(v["phi"], 6);
    assert_eq!(v["k"], 10);
    assert_eq!(v["caseLabel"], "mu-case-square");
    assert_eq!(v["clifford"], 8);
}

#[test]
fn destab_with_audit() {
    let v = json(&["--config", "i:2", "destab", "--class", "2E1+4E2", "--d", "5", "--audit"]);
    assert_eq!(v["minMN"], 4);
    assert_eq!(v["audit"]["mnBound"]["holds"], true);
    assert!(v["candidates"].as_array().unwrap().iter().all(|c| c["ell"].as_i64().unwrap() >= 0));
}

#[test]
fn example51_reproduces_n3() {
    let v = json(&["example51", "--n", "3"]);
    assert_eq!(v["csBound"], 25);
    assert_eq!(v["csHolds"], true);
    assert_eq!(v["gonSpecial"], 8);
}

#[test]
fn cohomology_of_half_pencil_multiple() {
    let v = json(&["cohomology", "--class", "3f+K"]);
    assert_eq!((v["h0"].as_i64(), v["h1"].as_i64(), v["h2"].as_i64()), (Some(2), Some(1), Some(0)));
}

#[test]
fn tsv_has_comment_header_and_table() {
    let out = run(&["--tsv", "--config", "i:2", "predict", "--class", "2E1+4E2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next(), Some("d\trho\tpredictedDim"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["predict", "--class", "E1"]).status.code(), Some(1));
    assert_eq!(run(&["predict", "--class", "2f+"]).status.code(), Some(1));
    assert_eq!(run(&["predict", "--class=-f"]).status.code(), Some(2));
    assert_eq!(run(&["example51", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "custom:[[0,60],[60,0]]", "cohomology", "--class", "E1"]).status.code(), Some(3));
}

#[test]
fn errors_go_to_stderr() {
    let out = run(&["predict", "--class=-f"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("not ample"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--config", "i:2", "destab", "--class", "2E1+4E2", "--d", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let a = run(&["selftest", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&["selftest", "--seed", "11"]).stdout);
}
