use std::process::{Command, Output};

use hf_frege::abstraction::{extension_of, Presentation};
use hf_frege::model::{Env, Universe, DEFAULT_BUDGET};
use hf_frege::syntax::{enumerate_u64, parse, ENUMERATION_VERSION};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hf-frege")).args(args).env_remove("HF_FREGE_BUDGET").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scalars(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.values().for_each(|x| scalars(x, out)),
        Value::Array(xs) => xs.iter().for_each(|x| scalars(x, out)),
        Value::String(s) => out.push(s.clone()),
        Value::Null => out.push("none".into()),
        other => out.push(other.to_string()),
    }
}

#[test]
fn version_carries_the_enumeration_tag() {
    let out = run(&["--version"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains(ENUMERATION_VERSION));
}

#[test]
fn extension_matches_the_library() {
    let v = json(&["extension", "--universe", "v3", "--formula", "x = x"]);
    let u = Universe::v_stage(3, false).unwrap();
    let obj = extension_of(&u, &Presentation::new(parse("x = x").unwrap(), Env::new()), DEFAULT_BUDGET).unwrap();
    assert_eq!(v["hf"], obj.as_hfset().to_string());
    assert_eq!(v["index"], obj.index);
    assert_eq!(v["kind"], "extension");
    assert_eq!(v["class"].as_array().unwrap().len(), 4);
}

#[test]
fn bindings_reach_the_formula() {
    let v = json(&["extension", "--formula", "x in $p", "--bind", "p=#3"]);
    assert_eq!(v["class"], serde_json::json!(["#0", "#1"]));
    assert_eq!(v["params"], serde_json::json!(["#3"]));
}

#[test]
fn enumeration_is_frozen_and_stable() {
    let a = run(&["enumerate", "--from", "0", "--count", "5"]);
    let b = run(&["enumerate", "--from", "0", "--count", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&["enumerate", "--from", "0", "--count", "5"]);
    let got: Vec<&str> = v["formulas"].as_array().unwrap().iter().map(|r| r["formula"].as_str().unwrap()).collect();
    let want: Vec<String> = (0..5).map(|n| enumerate_u64(n).to_string()).collect();
    assert_eq!(got, want);
}

#[test]
fn diagonal_against_membership() {
    let v = json(&["diagonal", "--T", "x in y"]);
    assert_eq!(v["value_T"], false);
    assert_eq!(v["value_R"], true);
    assert_eq!(v["R"], "not x in x");
    for key in ["T", "r", "universe_size"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn escape_reports_the_object_outside() {
    let v = json(&["escape", "--universe", "ack:8"]);
    assert_eq!(v["escaped"], true);
    assert!(v["object"]["hf"].is_string());
}

#[test]
fn text_mirrors_json() {
    for args in [
        &["extension", "--formula", "x in $p", "--bind", "p=#11"][..],
        &["diagonal", "--T", "y = x"],
        &["eliminate", "--formula", "eps[x | x in $p] = #3", "--bind", "p=#3"],
        &["code", "--formula", "all y not y in x"],
    ] {
        let text = String::from_utf8(run(args).stdout).unwrap();
        let mut values = Vec::new();
        scalars(&json(args), &mut values);
        for s in values {
            assert!(text.contains(&s), "{args:?}: `{s}` missing from text output");
        }
    }
}

#[test]
fn code_and_decode_round_trip() {
    let c = json(&["code", "--formula", "x in $p"]);
    assert_eq!(c["index"], 1);
    let d = json(&["decode", "--set", c["code"].as_str().unwrap()]);
    assert_eq!(d["formula"], "x in $p");
    assert_eq!(d["index"], 1);
}

#[test]
fn blv_check_default_corpus() {
    let v = json(&["blv-check", "--universe", "v2", "--corpus", "10"]);
    assert_eq!(v["presentations"], 20);
    assert_eq!(v["pairs"], 190);
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--formula", "x in"]).status.code(), Some(2));
    assert_eq!(run(&["extension", "--formula", "x in $p", "--bind", "p"]).status.code(), Some(2));
    assert_eq!(run(&["decode", "--set", "#0"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["extension", "--universe", "v9", "--formula", "x = x"]).status.code(), Some(3));
    assert_eq!(run(&["extension", "--formula", "x = $p", "--bind", "p=#2", "--budget", "0"]).status.code(), Some(3));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hf-frege"))
        .args(["extension", "--formula", "x = $p", "--bind", "p=#2", "--json"])
        .env("HF_FREGE_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "budget_exceeded");
}

#[test]
fn suite_subset_passes() {
    let out = run(&["suite", "--only", "3", "--only", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2, "{text}");
    assert_eq!(run(&["suite", "--only", "10"]).status.code(), Some(2));
}
