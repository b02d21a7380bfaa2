use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_pjensen");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn fresh_certificate(dir: &Path) -> (std::path::PathBuf, Value) {
    let path = dir.join("d3.json");
    let out = run(&["certify", "--d", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (path, doc)
}

#[test]
fn check_cert_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (path, doc) = fresh_certificate(dir.path());
    assert_eq!(doc["threshold_n0"], "344");
    assert_eq!(doc["verified"], true);
    assert!(doc["d"].is_string() && doc["error_bounds"][0]["bound"].is_string());
    assert_eq!(code(&run(&["check-cert", path.to_str().unwrap()])), 0);

    // c_0 sign flipped
    let mut tampered = doc.clone();
    let c0 = tampered["per_m"][0]["coefficients"][0].as_str().unwrap().to_string();
    tampered["per_m"][0]["coefficients"][0] = Value::from(format!("-{c0}"));
    let p = dir.path().join("flipped.json");
    std::fs::write(&p, tampered.to_string()).unwrap();
    assert_eq!(code(&run(&["check-cert", p.to_str().unwrap()])), 4);

    // wrong threshold
    let mut tampered = doc.clone();
    tampered["threshold_n0"] = Value::from("343");
    std::fs::write(&p, tampered.to_string()).unwrap();
    assert_eq!(code(&run(&["check-cert", p.to_str().unwrap()])), 4);

    // truncated file
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&p, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&run(&["check-cert", p.to_str().unwrap()])), 2);

    // well-formed JSON of the wrong shape
    let mut tampered = doc.clone();
    tampered["extra"] = Value::from("1");
    std::fs::write(&p, tampered.to_string()).unwrap();
    assert_eq!(code(&run(&["check-cert", p.to_str().unwrap()])), 3);
    let mut tampered = doc;
    tampered["d"] = Value::from(3);
    std::fs::write(&p, tampered.to_string()).unwrap();
    assert_eq!(code(&run(&["check-cert", p.to_str().unwrap()])), 3);

    assert_eq!(code(&run(&["check-cert", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn unverified_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.json");
    let out = run(&["certify", "--d", "3", "--epsilon", "0.045", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("choose smaller epsilon"));
    // the document is still consistent, just not a proof
    assert_eq!(code(&run(&["check-cert", path.to_str().unwrap()])), 1);
}

#[test]
fn sweep_outputs_and_codes() {
    let out = run(&["sweep", "--d", "5", "--from", "381", "--to", "2316", "--jobs", "4", "--json"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["failures"], Value::Array(vec![]));
    assert_eq!(doc["n_max"], "2316");

    let out = run(&["sweep", "--d", "2", "--from", "1", "--to", "50", "--method", "sturm", "--json"]);
    assert_eq!(code(&out), 1);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["failures"].as_array().unwrap().last().unwrap(), "24");

    assert_eq!(code(&run(&["sweep", "--d", "3", "--from", "10", "--to", "5"])), 2);
    assert_eq!(code(&run(&["sweep", "--d", "3", "--from", "1", "--to", "5", "--method", "newton"])), 2);
}

#[test]
fn find_n_is_deterministic_across_jobs() {
    let a = run(&["find-n", "--d", "3", "--jobs", "1", "--json"]);
    let b = run(&["find-n", "--d", "3", "--jobs", "5", "--json"]);
    assert_eq!(code(&a), 0);
    let mut da: Value = serde_json::from_slice(&a.stdout).unwrap();
    let mut db: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(da["N_of_d"], "94");
    da["certificate"]["timestamp"] = Value::Null;
    db["certificate"]["timestamp"] = Value::Null;
    assert_eq!(da, db);
}

#[test]
fn small_commands() {
    let out = run(&["partition", "100"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "190569292");
    let out = run(&["jensen", "3", "94"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("hyperbolic: hankel=true sturm=true"));
    let out = run(&["bound", "--d", "2"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("hermite hankel lower bound: 1"));
    let out = run(&["bound", "--d", "3", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let lo: f64 = doc["n_bound_log10"][0].as_str().unwrap().parse().unwrap();
    assert!((lo - 127.46).abs() < 0.01);
    assert_eq!(code(&run(&["bound", "--d", "1"])), 2);
    assert_eq!(code(&run(&["chen", "--n-max", "1"])), 2);
    assert_eq!(code(&run(&["certify", "--d", "3", "--sup", "maximize"])), 2);
}

#[test]
fn closed_form_strategy_is_weaker_but_sound() {
    // the fallback bound is much larger, so certification at the default ε fails
    let out = run(&["certify", "--d", "2", "--epsilon", "0.0295", "--sup", "lemma41", "--json"]);
    assert_eq!(code(&out), 1);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["sup_strategy"], "lemma41_closed_form");
    assert_eq!(doc["verified"], false);
    let ours: f64 = doc["error_bounds"][1]["bound"].as_str().unwrap().parse().unwrap();
    assert!(ours > 328255.0);
}
