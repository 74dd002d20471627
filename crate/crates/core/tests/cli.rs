use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setdiff")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn demo_interval_reports_the_average() {
    let v = json(&["demo-interval", "--n", "3"]);
    assert_eq!(v["tool"], "setdiff");
    assert_eq!(v["command"], "demo-interval");
    assert_eq!(v["result"]["average_density"], "1/8");
    assert_eq!(v["result"]["identity_holds"], true);
}

#[test]
fn scan_finds_a_full_cell() {
    let v = json(&["scan", "--family", &data("contains_one_n4.fam"), "--m", "2"]);
    assert_eq!(v["result"]["max_density"], "1");
    assert_eq!(v["result"]["average_density"], "1/2");
}

#[test]
fn verify_framework_counts() {
    let v = json(&["verify-framework", "--n", "4"]);
    assert_eq!(v["result"]["k"], 4);
    assert_eq!(v["result"]["l"], 16);
}

#[test]
fn extremal_d1_anchor() {
    let v = json(&["extremal", "--d", "1", "--n", "4", "--pattern", "power"]);
    assert_eq!(v["result"]["max_size"], 6);
}

#[test]
fn quasirandomize_e1() {
    let v = json(&["quasirandomize", "--family", &data("contains_one_n6.fam"), "--p", "2", "--eta", "1/2", "--m", "2"]);
    assert_eq!(v["result"]["trace"]["status"], "uniform");
    assert_eq!(v["result"]["trace"]["iterations"], 1);
    assert_eq!(v["result"]["final_density"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--family", "/definitely/missing.fam", "--m", "2"]).status.code(), Some(3));
    assert_eq!(run(&["scan", "--family", &data("contains_one_n4.fam"), "--m", "2", "--epsilon", "3/4"]).status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["phidist".to_string(), "--form".into(), data("mixed_f3_n6.form"), "--mode".into(), "sampled".into(), "--samples".into(), "500".into()],
        vec!["scan".into(), "--family".into(), data("contains_one_n6.fam"), "--m".into(), "2".into()],
        vec!["extremal".into(), "--d".into(), "2".into(), "--n".into(), "2".into(), "--pattern".into(), "clique".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}
