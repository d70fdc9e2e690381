use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_terwilliger")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_s3_text() {
    let out = run(&["analyze", "--n", "3", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dim T0 = 11  dim T = 11  dim T~ = 11  formula = 11"));
    assert!(text.contains("blocks (row sums):    {3,1,1}"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn invalid_twist_is_a_usage_error() {
    let out = run(&["analyze", "--n", "6", "--s", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid parameters"));
    assert_eq!(run(&["analyze", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--n-min", "9", "--n-max", "5"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--n", "5", "--s", "4", "--primes", "4,7"]).status.code(), Some(2));
}

#[test]
fn analyze_json_schema_and_round_trip() {
    let out = run(&["analyze", "--n", "8", "--s", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["tau"], 4);
    assert_eq!(v["dims"]["t"], 112);
    assert_eq!(v["dims"]["t0"], 112);
    assert_eq!(v["dims"]["t_tilde"], 112);
    assert_eq!(v["dims"]["formula"], 112);
    assert_eq!(v["triply_transitive"], true);
    assert_eq!(v["blocks"]["rowsum"], v["blocks"]["closedform"]);
    assert!(v["checks"].as_object().unwrap().values().all(|b| b == &Value::Bool(true)));
    for key in ["n", "s", "tau", "dims", "triply_transitive", "blocks", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn analyze_is_byte_deterministic() {
    let a = run(&["analyze", "--n", "12", "--s", "5", "--format", "json"]);
    let b = run(&["analyze", "--n", "12", "--s", "5", "--format", "json", "--generator-order", "reversed"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_csv_rows() {
    let out = run(&["sweep", "--n-min", "3", "--n-max", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,s,tau,dim_t0,dim_t,dim_t_tilde,formula,pass"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r[7] == "true"));
    let eights: Vec<&str> = rows.iter().filter(|r| r[0] == "8").map(|r| r[1]).collect();
    assert_eq!(eights, ["3", "5", "7"]);
    for prime in ["3", "5", "7"] {
        assert_eq!(rows.iter().filter(|r| r[0] == prime).count(), 1);
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed 0"));
}

#[test]
fn sweep_beyond_closure_bound_leaves_dim_t_empty() {
    let out = run(&["sweep", "--n-min", "41", "--n-max", "42", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[..2], ["41", "40"]);
    assert_eq!(row[4], "");
    let forced = run(&["sweep", "--n-min", "41", "--n-max", "41", "--format", "json", "--force-closure"]);
    let v: Value = serde_json::from_slice(&forced.stdout).unwrap();
    assert_eq!(v["rows"][0]["dim_t"], v["rows"][0]["formula"]);
}

#[test]
fn audit_rows() {
    let out = run(&["audit-corollaries", "--n-min", "3", "--n-max", "12", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["n", "printed_blocks", "derived_blocks", "agree", "note"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let row = |n: &str| rows.iter().find(|r| &r[0] == n).unwrap().clone();
    assert_eq!(&row("6")[3], "true");
    assert_eq!(&row("5")[3], "false");
    assert!(row("5")[4].contains("M_1: printed 1 derived 2"));
    assert_eq!(&row("8")[3], "false");
    assert!(row("8")[4].contains("M_2: printed 0 derived 1"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("audited 10"));
}

#[test]
fn char_table_exports() {
    let out = run(&["char-table", "--n", "8", "--s", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["columns"].as_array().unwrap().len(), 7);
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
    let csv_out = stdout(&run(&["char-table", "--n", "3", "--s", "2", "--format", "csv"]));
    assert_eq!(csv_out.lines().next(), Some("character,degree,class,rep,class_size,value,re,im"));
    assert_eq!(csv_out.lines().count(), 1 + 9);
    assert!(csv_out.contains("phi_1,2,Y1,a^1,2,w^1 + w^2,-1.000000000000,0"));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("terwilliger-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.json");
    let out = run(&["sweep", "--n-min", "3", "--n-max", "6", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], 4);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn prime_overrides_from_environment() {
    let base = run(&["analyze", "--n", "7", "--s", "6", "--format", "json"]);
    let out = Command::new(env!("CARGO_BIN_EXE_terwilliger"))
        .args(["analyze", "--n", "7", "--s", "6", "--format", "json"])
        .env("TERWILLIGER_PRIME_1", "1000003")
        .env("TERWILLIGER_PRIME_2", "998244353")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, base.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_terwilliger"))
        .args(["analyze", "--n", "7", "--s", "6"])
        .env("TERWILLIGER_PRIME_2", "1000001")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
