use std::process::{Command, Output};

use serde_json::Value;
use shtuka_core::shtuka::Report;

fn shtuka(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shtuka")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

#[test]
fn st_check_prints_the_block_scalars() {
    let o = shtuka(&["st-check", "z3-frobenius", "--rep", "chi1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("[PASS] S = T [chi1; no legs]"), "{out}");
    assert!(out.contains("(1, z3, -1-z3)"), "{out}");
}

#[test]
fn locsys_reports_the_fixed_locus_cardinality() {
    let o = shtuka(&["locsys", "s3-inertia"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for w in ["weight 1/6", "weight 1/2", "weight 1/3"] {
        assert!(out.contains(w), "{out}");
    }
    let fixed = out.split("fixed groupoid").nth(1).unwrap();
    assert!(fixed.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["cardinality", "1"]), "{out}");
    let torus = stdout(&shtuka(&["locsys", "--torus", "--scenario", "s3-inertia"]));
    assert!(torus.contains("fixed groupoid (mapping torus)"));
}

#[test]
fn json_reports_round_trip_and_are_deterministic() {
    let args = ["trace", "s3-inertia", "--legs", "std", "--json", "-"];
    let (a, b) = (shtuka(&args), shtuka(&args));
    assert!(a.status.success());
    let report = Report::from_json(&stdout(&a)).unwrap();
    assert_eq!(report.command, "trace");
    assert!(report.passed());
    let (mut x, mut y): (Value, Value) = (serde_json::from_str(&stdout(&a)).unwrap(), serde_json::from_str(&stdout(&b)).unwrap());
    strip_timings(&mut x);
    strip_timings(&mut y);
    assert_eq!(x, y);
}

#[test]
fn json_file_output() {
    let path = std::env::temp_dir().join(format!("shtuka-cli-{}.json", std::process::id()));
    let o = shtuka(&["chern", "z4-circle", "--json", path.to_str().unwrap()]);
    assert!(o.status.success());
    let report = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.checks.len(), 4);
    assert!(report.passed());
}

#[test]
fn exit_status_follows_the_checks() {
    assert!(shtuka(&["excursion", "span", "s3-inertia", "--loop-length", "1"]).status.success());
    let failing = shtuka(&["excursion", "span", "z3-frobenius", "--loop-length", "0"]);
    assert_eq!(failing.status.code(), Some(1));
    assert!(stdout(&failing).contains("[FAIL]"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(shtuka(&["bogus"]).status.code(), Some(2));
    assert_eq!(shtuka(&["chern", "z3-frobenius"]).status.code(), Some(2));
    assert_eq!(shtuka(&["trace"]).status.code(), Some(2));
    assert_eq!(shtuka(&["trace", "z3-frobenius", "--rep", "nope"]).status.code(), Some(2));
    let both = shtuka(&["trace", "z3-frobenius", "--scenario", "s3-inertia"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn remaining_commands_pass_on_builtins() {
    for args in [
        &["hh", "s3-inertia", "--legs", "std"][..],
        &["frobenius", "s3-inertia", "--legs", "std,sign"][..],
        &["frobenius", "z3-frobenius"][..],
        &["excursion", "eval", "s3-inertia", "--rep", "std"][..],
        &["excursion", "eval", "f2-swap", "--loops", "t a; b"][..],
        &["st-check", "s3-inertia", "--rep", "sign", "--legs", "std"][..],
        &["locsys", "f2-swap"][..],
    ] {
        let o = shtuka(args);
        assert!(o.status.success(), "{args:?}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    }
    let eval = stdout(&shtuka(&["excursion", "eval", "s3-inertia", "--rep", "std"]));
    assert!(eval.contains("(2, 0, -1)"), "{eval}");
}
