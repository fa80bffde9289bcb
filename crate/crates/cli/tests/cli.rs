use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kshuffle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn single_box_creation_coefficient() {
    let o = run(&["coeff", "--r", "1", "--sign", "+", "--m", "z^0", "--from", "()", "--to", "(1)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "t1");
}

#[test]
fn verify_drinfeld_rank_one() {
    let o = run(&["verify", "R4", "--r", "1", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_json_report_is_versioned() {
    let v = json(&["verify", "R1", "--r", "1", "--d", "1", "--k", "2"]);
    assert_eq!(v["schema"], "kshuffle.report");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["relation"], "R1");
    assert_eq!(v["passed"], true);
}

#[test]
fn perturbed_verify_exits_one() {
    let o = run(&["verify", "R4", "--r", "1", "--d", "2", "--perturb", "literal-h"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn corner_character() {
    let o = run(&["char", "--W", "--lambda", "(4,3,1)", "--method", "corners"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let gamma = json(&["char", "--W", "--lambda", "(4,3,1)", "--method", "gamma"]);
    let corners = json(&["char", "--W", "--lambda", "(4,3,1)", "--method", "corners"]);
    assert_eq!(gamma["value"], corners["value"]);
    assert_eq!(corners["schema"], "kshuffle.char");
    assert_eq!(corners["schema_version"], 1);
}

#[test]
fn tangent_character_weights() {
    let v = json(&["char", "--tangent", "--r", "2", "--lambda", "(2)|(1)"]);
    let total: i64 = v["weights"].as_array().unwrap().iter().map(|w| w[1].as_i64().unwrap()).sum();
    assert_eq!(total, 2 * 2 * 3);
}

#[test]
fn syt_count() {
    let v = json(&["syt", "--r", "2", "--from", "()|()", "--to", "(2)|(1)"]);
    assert_eq!(v["count"], 3);
    let v = json(&["syt", "--from", "()", "--to", "(2,1)"]);
    assert_eq!(v["count"], 2);
}

#[test]
fn shuffle_reports_wheel() {
    let v = json(&["shuffle", "--element", "P", "--k", "2", "--index", "1"]);
    assert_eq!(v["wheel"], true);
    assert_eq!(v["k"], 2);
}

#[test]
fn matrix_and_apply_agree() {
    let m = json(&["matrix", "--op", "P:1,0", "--sign", "+", "--r", "1", "--d", "1"]);
    let a = json(&["apply", "--op", "P:1,0", "--sign", "+", "--r", "1", "--vector", "(1)=1"]);
    assert_eq!(m["target"], 2);
    let from_matrix: Vec<(&Value, &Value)> = m["entries"].as_array().unwrap().iter().map(|e| (&e["to"], &e["value"]["text"])).collect();
    let from_apply: Vec<(&Value, &Value)> = a["entries"].as_array().unwrap().iter().map(|e| (&e["lambda"], &e["value"]["text"])).collect();
    assert_eq!(from_matrix, from_apply);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("kshuffle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("coeff.json");
    let o = run(&[
        "coeff", "--r", "1", "--sign", "+", "--m", "1", "--from", "()", "--to", "(1)", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["value"]["text"], "t1");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["char", "--W", "--lambda", "(4,3"][..],
        &["coeff", "--r", "1", "--m", "1", "--from", "()", "--to", "(1)"],
        &["coeff", "--r", "1", "--sign", "*", "--m", "1", "--from", "()", "--to", "(1)"],
        &["coeff", "--r", "2", "--sign", "+", "--m", "1", "--from", "()", "--to", "(1)"],
        &["coeff", "--r", "1", "--sign", "+", "--op", "Q:1", "--from", "()", "--to", "(1)"],
        &["verify", "R4", "--mode", "sloppy"],
        &["verify", "R4", "--gcd", "maybe"],
        &["nonsense"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn computation_errors_exit_one_with_name() {
    let o = run(&["verify", "R13"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnknownRelation"), "{}", stderr(&o));

    let o = run(&["char", "--tv", "--lambda", "(2)", "--mu", "(1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NotAFixedPair"), "{}", stderr(&o));
}

#[test]
fn gcd_off_gives_same_coefficient() {
    let args = ["coeff", "--r", "2", "--sign", "-", "--op", "P:2,1", "--from", "(2)|(1)", "--to", "(1)|()"];
    let on = json(&args);
    let mut off_args = args.to_vec();
    off_args.extend(["--gcd", "off"]);
    let off = json(&off_args);
    assert_eq!(on["value"]["terms"], off["value"]["terms"]);
}
