use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vdb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdb"))
        .args(args)
        .env_remove("VDB_CHECKPOINT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn compute_on_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.g6", "Cl\n");
    let out = vdb(&["compute", &c4, "--index", "sombor", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!((report["ti"].as_f64().unwrap() - 8.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!((report["n"].as_u64(), report["m"].as_u64(), report["k"].as_u64()), (Some(4), Some(4), Some(1)));
    assert!(report.get("exponential_ti").is_none());

    let edges = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let out = vdb(&["compute", &edges, "--format", "edges", "--exponential", "--json"]);
    let report = json(&out);
    assert!((report["exponential_ti"].as_f64().unwrap() - 4.0 * 8f64.sqrt().exp()).abs() < 1e-9);
}

#[test]
fn compute_on_constructed_minimizer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("min.g6");
    let out = vdb(&["construct", "--n", "10", "--k", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = vdb(&["compute", path.to_str().unwrap(), "--index", "gsc", "--alpha", "0.5", "--json"]);
    let ti = json(&out)["ti"].as_f64().unwrap();
    // 2 sqrt 5 + 5 * 2 + 5 sqrt 6
    assert!((ti - 26.719_584_668_915_47).abs() < 1e-9);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.g6", "C~~\n");
    assert_eq!(vdb(&["compute", &bad]).status.code(), Some(2));
    let unknown = write(dir.path(), "graph.dat", "Cl\n");
    assert_eq!(vdb(&["compute", &unknown]).status.code(), Some(2));
    let c4 = write(dir.path(), "c4.g6", "Cl\n");
    assert_eq!(vdb(&["compute", &c4, "--index", "gsombor"]).status.code(), Some(2));
    assert_eq!(vdb(&["compute", &c4, "--index", "sombor", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(vdb(&["compute", &c4, "--index", "zagreb"]).status.code(), Some(2));
    assert_eq!(vdb(&["compute", "/nonexistent/x.g6"]).status.code(), Some(2));
    assert_eq!(vdb(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.g6", "C~\n");
    // e^(6^12) overflows
    let out = vdb(&["compute", &k4, "--index", "exp:gsc", "--alpha", "12"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(vdb(&["construct", "--n", "9", "--k", "3"]).status.code(), Some(3));
    assert_eq!(vdb(&["verify", "--n", "8", "--k", "3"]).status.code(), Some(3));
    assert_eq!(vdb(&["descend", "--n", "4", "--k", "4", "--chemical"]).status.code(), Some(3));
}

#[test]
fn property_verdicts() {
    let out = vdb(&["property", "--index", "sombor", "--dmax", "50", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pstar_holds"], "pass");

    let out = vdb(&["property", "--index", "gsc", "--alpha", "-1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["pstar_holds"], "fail");
    assert!(report["counterexample"].is_object());

    assert_eq!(vdb(&["property", "--index", "psombor", "--p", "1.5"]).status.code(), Some(0));
    assert_eq!(vdb(&["property", "--dmax", "2"]).status.code(), Some(2));
}

#[test]
fn construct_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.edges");
    let out = vdb(&[
        "construct", "--n", "21", "--k", "5", "--format", "edges", "--out", path.to_str().unwrap(), "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!((cert["m22"].as_u64(), cert["m23"].as_u64(), cert["m33"].as_u64()), (Some(12), Some(2), Some(11)));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("21 25\n"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn verify_chemical_and_checkpoint_dir() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_vdb"))
        .args(["verify", "--n", "10", "--k", "3", "--index", "sombor", "--class", "chemical", "--workers", "2"])
        .args(["--checkpoint", "cursor.json", "--out", report.to_str().unwrap()])
        .env("VDB_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("cursor.json").exists());
    let first = fs::read(&report).unwrap();
    let value: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(value["match"], true);
    assert!((value["min_value"].as_f64().unwrap() - 42.566_441_610_255_35).abs() < 1e-9);
    assert!(value.get("elapsed_seconds").is_none());

    // resumed from the cursor, single worker: identical report bytes
    let out = Command::new(env!("CARGO_BIN_EXE_vdb"))
        .args(["verify", "--n", "10", "--k", "3", "--index", "sombor", "--class", "chemical", "--workers", "1"])
        .args(["--checkpoint", "cursor.json", "--out", report.to_str().unwrap()])
        .env("VDB_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&report).unwrap(), first);
}

#[test]
fn verify_rejects_uncertified_weight() {
    let out = vdb(&["verify", "--n", "10", "--k", "3", "--index", "gsc", "--alpha", "-1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn descend_runs_are_monotone_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let traces = dir.path().join("traces");
    for (out, workers) in [(&a, "1"), (&b, "3")] {
        let status = vdb(&[
            "descend", "--n", "30", "--k", "3", "--index", "sombor", "--seeds", "6", "--chemical",
            "--workers", workers, "--out", out.to_str().unwrap(), "--trace-dir", traces.to_str().unwrap(),
        ])
        .status;
        assert_eq!(status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let report: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["all_monotone"], true);
    assert_eq!(report["below_closed_form"], 0);
    let bound = 65.0 * 2f64.sqrt() + 2.0 * 13f64.sqrt();
    assert!(report["min_final_ti"].as_f64().unwrap() >= bound - 1e-9);

    let trace = fs::read_to_string(traces.join("seed-0.jsonl")).unwrap();
    for line in trace.lines() {
        let step: Value = serde_json::from_str(line).unwrap();
        assert_eq!(step["move"].as_array().unwrap().len(), 4);
        assert!(step["delta"].as_f64().unwrap() < 0.0);
    }
}

#[test]
fn descend_from_minimizer_takes_no_steps() {
    let out = vdb(&["descend", "--n", "10", "--k", "3", "--from-minimizer", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["runs"][0]["steps"], 0);
    assert!((report["min_final_ti"].as_f64().unwrap() - 42.566_441_610_255_35).abs() < 1e-9);
}
