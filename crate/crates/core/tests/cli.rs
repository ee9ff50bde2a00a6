use std::process::{Command, Output};

use pendinv::series::{Series2Json, TruncatedSeries2};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pendinv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn action_at_the_critical_value() {
    let o = run(&["action", "--h", "0", "--j2", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["two_pi_I1"], 8.0);
    assert!(v["W"].is_null());
}

#[test]
fn action_csv_header() {
    let o = run(&["action", "--h", "0.1", "--j2", "-0.1", "--format", "csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("h,j2,I1,J1,W,T,method"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 7);
    let w: f64 = row[4].parse().unwrap();
    assert!(w < 0.0, "W is odd in j2");
}

#[test]
fn normal_form_output() {
    let o = run(&["nf", "--order", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let lie: Series2Json = serde_json::from_value(v["lie"].clone()).unwrap();
    let s = TruncatedSeries2::try_from(&lie).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s.coeff(1, 0), 1);
    let o = run(&["nf", "--order", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equal"], true);
    let lie: Series2Json = serde_json::from_value(v["lie"].clone()).unwrap();
    let s = TruncatedSeries2::try_from(&lie).unwrap();
    assert_eq!(Series2Json::from(&s), lie);
    assert_eq!(s.coeff(0, 2), rug::Rational::from((3, 16)));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["action", "--h", "-3", "--j2", "0"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "--W", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "legendre", "nome"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    let o = run(&["verify", "--suite", "model-error"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn deterministic_output() {
    let args = ["verify", "--suite", "legendre", "--seed", "7", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other = run(&["verify", "--suite", "legendre", "--seed", "8", "--format", "json"]);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn orbit_search_and_trace() {
    let dir = std::env::temp_dir().join(format!("pendinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("orbit.csv");
    let o = run(&["orbit", "--W", "3/4", "--r", "0.75", "--format", "json", "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["target", "s", "h", "j2", "closure_error"] {
        assert!(!v[key].is_null(), "{key}");
    }
    assert!(v["closure_error"].as_f64().unwrap() < 1e-6);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("t,x,y,z,px,py,pz,u,v\n"));
    assert!(csv.lines().count() > 100);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pendulum_and_invariants_tables() {
    let o = run(&["pendulum", "--h", "-1", "1", "--format", "csv"]);
    assert!(stdout(&o).starts_with("h,I,J,T,U,IU-JT,branch"));
    let o = run(&["pendulum", "--nome", "--order", "7"]);
    assert!(stdout(&o).contains("458192*l^7"));
    let o = run(&["invariants", "--order", "4", "--precision", "128"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("271/32768") && out.contains("-51/512"));
}
