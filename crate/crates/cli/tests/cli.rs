use std::path::PathBuf;
use std::process::{Command, Output};

use ellchain_core::chain::{LimitLinearSeries, Redistribution, ValidationReport};
use ellchain_core::theorems::Verdict;
use serde_json::Value;

fn ellchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellchain"))
        .args(args)
        .env_remove("ELLCHAIN_FORMAT")
        .env_remove("ELLCHAIN_SEED")
        .env_remove("ELLCHAIN_TRIALS")
        .env_remove("ELLCHAIN_PRIME")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    ellchain(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = ellchain(&a);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn roundtrip<T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug>(v: &Value) -> T {
    let x: T = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(&serde_json::to_value(&x).unwrap(), v);
    let again: T = serde_json::from_value(serde_json::to_value(&x).unwrap()).unwrap();
    assert_eq!(again, x);
    x
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn canonical_table_matches_golden() {
    let out = ellchain(&["canonical", "--g", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("golden/canonical_g3.txt");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn canonical_json_round_trips() {
    let v = json(&["canonical", "--g", "5"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "canonical");
    let series: LimitLinearSeries = roundtrip(&v["result"]["series"]);
    assert_eq!(series.tables.len(), 5);
    let rep: ValidationReport = roundtrip(&v["result"]["validation"]);
    assert!(rep.passes());
    // the special row on C_i sits at (2(i-1), 2g-2i)
    for (i, t) in series.tables.iter().enumerate() {
        assert!(t.rows.iter().any(|r| (r.ord_p, r.ord_q) == (2 * i as i64, 8 - 2 * i as i64)));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["canonical", "--g", "1"]), 2);
    assert_eq!(code(&["tableaux", "--g", "2", "--r", "-2", "--d", "1"]), 2);
    assert_eq!(code(&["petri", "--g", "4..6", "--r", "2", "--d", "6", "--k", "2"]), 2);
    assert_eq!(code(&["endo", "--g", "5", "--r", "2", "--d", "4"]), 2);
    assert_eq!(code(&["petri", "--g", "5", "--r", "2", "--d", "7", "--k", "3", "--prime", "91"]), 2);
    assert_eq!(code(&["validate", "/nonexistent/series.json"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn tableaux_counts() {
    let count = |g: &str, r: &str, d: &str| {
        let out = ellchain(&["tableaux", "--g", g, "--r", r, "--d", d]);
        String::from_utf8(out.stdout).unwrap().trim().to_string()
    };
    assert_eq!(count("4", "1", "3"), "2");
    assert_eq!(count("6", "1", "4"), "5");
    assert_eq!(count("2", "1", "2"), "1");
    let v = json(&["tableaux", "--g", "4", "--r", "1", "--d", "3", "--enumerate"]);
    assert_eq!(v["result"]["tableaux"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["rho"], 0);
}

#[test]
fn petri_single_and_exit_codes() {
    let v = json(&["petri", "--g", "5", "--r", "2", "--d", "7", "--k", "3"]);
    let verdict: Verdict = roundtrip(&v["result"]);
    assert_eq!(v["result"]["status"], "proven");
    assert_eq!(v["result"]["case"], "d2>=k2,d2!=0");
    assert_eq!(verdict.certified(), 12);
    assert_eq!(v["oracle"]["seed"], 0);
    assert_eq!(code(&["petri", "--g", "4", "--r", "2", "--d", "6", "--k", "2"]), 0);
    assert_eq!(code(&["petri", "--g", "3", "--r", "2", "--d", "4", "--k", "4"]), 3);
    let v = json(&["petri", "--g", "3", "--r", "2", "--d", "4", "--k", "4"]);
    assert_eq!(v["result"]["status"], "hypothesis-not-met");
}

#[test]
fn endo_examples() {
    let v = json(&["endo", "--g", "4", "--r", "2", "--d", "4"]);
    let verdict: Verdict = roundtrip(&v["result"]);
    assert_eq!((v["result"]["status"].as_str(), verdict.certified()), (Some("proven"), 27));
    let v = json(&["endo", "--g", "4", "--r", "2", "--d", "5"]);
    assert_eq!(v["result"]["status"], "proven");
    assert_eq!(v["result"]["params"]["h"], 2);
    assert_eq!(code(&["endo", "--g", "4", "--r", "1", "--d", "4"]), 0);
    let v = json(&["endo", "--g", "4", "--r", "1", "--d", "4"]);
    assert_eq!(v["result"]["status"], "vacuous");
}

#[test]
fn sweeps_are_proven_and_deterministic() {
    let args = ["petri", "--sweep", "--g", "4..7", "--r", "2..3"];
    let a = ellchain(&[&args[..], &["--format", "json"]].concat());
    let b = ellchain(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = v["result"]["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["status"] == "proven"));
    // rejected tuples appear only on request, and do not fail a sweep
    let all = ellchain(&["petri", "--sweep", "--g", "3", "--r", "2", "--d", "4", "--k", "1..4", "--all"]);
    assert_eq!(all.status.code(), Some(0));
    let text = String::from_utf8(all.stdout).unwrap();
    assert!(text.contains("hypothesis-not-met"));
    assert_eq!(code(&["endo", "--sweep", "--g", "4..6", "--r", "2..3"]), 0);
}

#[test]
fn seed_controls_output() {
    let run = |seed: &str| ellchain(&["petri", "--g", "5", "--r", "2", "--d", "7", "--k", "3", "--format", "json", "--seed", seed]).stdout;
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
    let env = Command::new(env!("CARGO_BIN_EXE_ellchain"))
        .args(["petri", "--g", "5", "--r", "2", "--d", "7", "--k", "3"])
        .env("ELLCHAIN_SEED", "7")
        .env("ELLCHAIN_FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(env.stdout, run("7"));
}

#[test]
fn validate_and_redistribute_read_series_files() {
    let path = scratch("canonical4.json");
    let out = ellchain(&["canonical", "--g", "4", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v = json(&["validate", path.to_str().unwrap()]);
    assert_eq!(v["result"]["validation"]["degree_sum"], true);
    assert_eq!(v["result"]["rank1"]["refined"], true);

    let v = json(&["redistribute", "--series", path.to_str().unwrap(), "--dprime", "2,2,1,1"]);
    let red: Redistribution = roundtrip(&v["result"]["redistribution"]);
    assert_eq!(red.bundles.iter().map(|b| b.degree()).collect::<Vec<_>>(), [2, 2, 1, 1]);
    assert_eq!(code(&["redistribute", "--g", "4", "--dprime", "1,1,1"]), 2);

    // break the node condition and the validator must refuse it
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["result"]["series"]["tables"][1]["rows"][0]["ord_q"] = Value::from(0);
    let bad = scratch("broken4.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&["validate", bad.to_str().unwrap()]), 3);
}
