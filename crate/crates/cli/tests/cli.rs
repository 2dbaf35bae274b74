use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ekrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekrlab"))
        .args(args)
        .env_remove("EKRLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ekrlab-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn check_reports_verdict_and_exit_code() {
    let out = ekrlab(&["check", "check_russo", "n=5", "f=or(1,2)", "p=1/3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "HOLDS");

    let out = ekrlab(&["check", "check_russo", "n=5", "f=level(2)", "p=1/3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "ERROR");

    let out = ekrlab(&["check", "no_such_checker"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_checker"));
}

#[test]
fn check_csv_has_header_and_one_row() {
    let out = ekrlab(&["--format", "csv", "check", "mu", "n=3", "f=dict(1)", "p=1/3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("checker,params,verdict"));
    assert!(lines[1].contains("VALUE") && lines[1].contains("1/3"));
}

#[test]
fn checkers_lists_the_registry() {
    let out = ekrlab(&["checkers"]);
    assert_eq!(out.status.code(), Some(0));
    let list = json(&out);
    let ids: Vec<&str> = list.as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    for id in ["check_russo", "max_union_intersecting", "verify_theorem", "check_indicator_claim"] {
        assert!(ids.contains(&id), "{id}");
    }
}

#[test]
fn default_suite_passes_and_replays() {
    let a = ekrlab(&["suite", "paper-tools"]);
    let b = ekrlab(&["suite", "paper-tools", "--workers", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let (mut a, mut b) = (json(&a), json(&b));
    assert_eq!(a["ok"], true);
    a.as_object_mut().unwrap().remove("timestamp");
    b.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(a, b);
}

#[test]
fn failing_suite_exits_nonzero() {
    let dir = scratch("suite");
    let path = dir.join("bad.toml");
    std::fs::write(&path, "name = \"bad\"\n\n[[check]]\nchecker = \"check_russo\"\nparams = { n = 4, f = \"level(2)\", p = \"1/2\" }\n").unwrap();
    let out = ekrlab(&["suite", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["summary"]["errors"], 1);

    std::fs::write(&path, "name = [").unwrap();
    assert_eq!(ekrlab(&["suite", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ekrlab(&["suite", dir.join("absent.toml").to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn search_respects_workers_env_and_writes_witnesses() {
    let dir = scratch("search");
    let out = Command::new(env!("CARGO_BIN_EXE_ekrlab"))
        .args(["search", "union", "--n", "7", "--k", "2", "--r", "2", "--all-witnesses", "--witness-dir"])
        .arg(&dir)
        .env("EKRLAB_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["optimum"], 11);
    assert_eq!(v["complete"], true);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 1);
    let written = std::fs::read_to_string(dir.join("witness-1.fam")).unwrap();
    assert!(written.starts_with("n=7"));
    assert_eq!(written.lines().count(), 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn search_budget_marks_incomplete() {
    let out = ekrlab(&["search", "intersecting", "--n", "9", "--k", "4", "--budget-nodes", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["complete"], false);
}

#[test]
fn search_csv_row() {
    let out = ekrlab(&["search", "matching", "--n", "8", "--k", "2", "--s", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[1..5], ["8", "2", "13", "true"]);
}

#[test]
fn theorem_reports_status() {
    let out = ekrlab(&["theorem", "main-union", "--n", "7", "--k", "2", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["optimum"], 11);
    assert_eq!(v["status"], "CONFIRMED");
    assert_eq!(v["regime"], "IN-REGIME");

    let out = ekrlab(&["theorem", "ekr", "--n", "5", "--k", "2"]);
    assert_eq!(json(&out)["optimum"], 4);

    assert_eq!(ekrlab(&["theorem", "nonsense", "--n", "5", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn scan_ff_tabulates() {
    let out = ekrlab(&["--format", "csv", "scan", "ff", "--k", "3", "--n", "7..9", "--t", "1..2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 2);

    let out = ekrlab(&["scan", "ff", "--k", "3", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 3);
}
