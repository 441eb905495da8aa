use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use vlike::formats::RealizationDoc;
use vlike_core::identify::TRealization;
use vlike_core::lsmodule::LsModuleSpec;
use vlike_core::{LatticeVector, Scalar};

fn vlike(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlike"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_vec(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn grid(range: i64) -> Vec<LatticeVector> {
    (-range..=range)
        .flat_map(|a| (-range..=range).map(move |b| LatticeVector::new(a, b)))
        .collect()
}

#[test]
fn tmatrix_examples() {
    let out = vlike(&["tmatrix", "--lambda", "0", "--alpha", "2,3", "--r", "1,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"[["3"]]"#);

    let out = vlike(&["tmatrix", "--lambda", "1", "--alpha", "1/2,0", "--r", "1,1"]);
    assert_eq!(stdout_json(&out), json!([["-3/2", "1"], ["-1", "1/2"]]));

    let out = vlike(&["tmatrix", "--lambda", "2", "--alpha", "-1/3,4", "--r", "0,0"]);
    assert_eq!(stdout_json(&out), json!([["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]));
}

#[test]
fn tmatrix_rejects_bad_alpha() {
    let out = vlike(&["tmatrix", "--alpha", "1/0,2", "--r", "1,0"]);
    assert_eq!(code(&out), 64);
    assert!(out.stdout.is_empty());
}

#[test]
fn identify_round_trip() {
    let out = vlike(&["identify", "--lambda", "3", "--alpha", "-1/2,5", "--conjugate-seed", "11"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["alpha"], json!(["-1/2", "5"]));
    assert_eq!(doc["lambda"], json!(3));
    assert_eq!(doc["triple"]["dim"], json!(4));
}

#[test]
fn identify_trivial_module() {
    let out = vlike(&["identify", "--lambda", "0", "--alpha", "0,0"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["alpha"], json!(["0", "0"]));
    assert_eq!(doc["lambda"], json!(0));
    assert_eq!(doc["tau1"], json!("0"));
    assert_eq!(doc["tau2"], json!("0"));
}

#[test]
fn identify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = LsModuleSpec::new(2, [Scalar::ratio(3, 4), Scalar::from_int(-2)], Scalar::zero());
    let doc = RealizationDoc::tabulate(&TRealization::from_module(&spec), &grid(2));
    let path = write_json(dir.path(), "module.json", &doc);
    let out = vlike(&["identify", "--input", &path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let result = stdout_json(&out);
    assert_eq!(result["alpha"], json!(["3/4", "-2"]));
    assert_eq!(result["lambda"], json!(2));
}

#[test]
fn cubic_corruption_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let spec = LsModuleSpec::new(3, [Scalar::ratio(-1, 2), Scalar::from_int(5)], Scalar::zero());
    let cubic = TRealization::from_module(&spec).with_scalar_term(|r| Scalar::from_int(r.r1.pow(3)));
    let path = write_json(dir.path(), "cubic.json", &RealizationDoc::tabulate(&cubic, &grid(2)));
    let out = vlike(&["identify", "--input", &path]);
    assert_eq!(code(&out), 5);
    let err = stdout_json(&out);
    assert_eq!(err["error"]["stage"], json!("quadratic-audit"));
    assert_eq!(err["error"]["code"], json!(5));
    assert!(!out.stderr.is_empty());
}

#[test]
fn identify_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let out = vlike(&["identify", "--input", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 66);

    let path = write_json(dir.path(), "bad.json", &json!({ "dim": 2, "samples": [{ "r": [1, 0], "matrix": [["1"]] }] }));
    assert_eq!(code(&vlike(&["identify", "--input", &path])), 65);

    // Only a handful of points: the probe core is not covered.
    let spec = LsModuleSpec::new(1, [Scalar::one(), Scalar::one()], Scalar::zero());
    let sparse = RealizationDoc::tabulate(&TRealization::from_module(&spec), &[LatticeVector::E1]);
    let path = write_json(dir.path(), "sparse.json", &sparse);
    let out = vlike(&["identify", "--input", &path]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["error"]["stage"], json!("structural-audit"));

    assert_eq!(code(&vlike(&["identify", "--lambda", "1"])), 64);
}

#[test]
fn verify_examples() {
    let out = vlike(&["verify", "commutator-identity", "--seed", "7", "--samples", "100", "--max-k", "5"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["suite"], json!("commutator-identity"));
    assert_eq!(report["cases"], json!(400));
    assert_eq!(report["failures"], json!([]));

    let out = vlike(&["verify", "delta3-vanish", "--max-lambda", "6"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["failures"], json!([]));

    let out = vlike(&["verify", "jacobi", "--range", "2", "--samples", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["cases"], json!(75u64.pow(3)));
}

#[test]
fn every_suite_runs_with_a_small_budget() {
    let small = ["--samples", "3", "--max-lambda", "2", "--max-k", "3", "--range", "1"];
    for suite in [
        "jacobi",
        "poisson-consistency",
        "module-axioms",
        "t-bracket",
        "delta-identities",
        "commutator-identity",
        "sym-power",
        "weight-check",
        "delta3-vanish",
        "mu-independence",
    ] {
        let mut args = vec!["verify", suite];
        args.extend(small);
        let out = vlike(&args);
        assert_eq!(code(&out), 0, "{suite}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "t-bracket", "--seed", "42", "--samples", "20"][..],
        &["verify", "module-axioms", "--seed", "5", "--samples", "10", "--max-lambda", "2"][..],
        &["identify", "--lambda", "2", "--alpha", "1/3,-1", "--conjugate-seed", "4"][..],
    ] {
        let a = vlike(args);
        let b = vlike(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn x_eigen_failure_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = vlike(&["verify", "x-eigen", "--max-k", "4"]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    let failures = report["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0]["witness"], json!({ "kind": "x-eigen", "k": 1 }));

    let path = write_json(dir.path(), "report.json", &report);
    let replayed = vlike(&["verify", "x-eigen", "--replay", &path]);
    assert_eq!(code(&replayed), 1);
    assert_eq!(stdout_json(&replayed)["failures"], report["failures"]);

    let passing = write_json(dir.path(), "case.json", &json!({ "kind": "x-eigen", "k": 3 }));
    assert_eq!(code(&vlike(&["verify", "x-eigen", "--replay", &passing])), 0);
    assert_eq!(code(&vlike(&["verify", "jacobi", "--replay", &path])), 65);
}

#[test]
fn list_and_usage_errors() {
    let out = vlike(&["verify", "--list"]);
    assert_eq!(code(&out), 0);
    let list = stdout_json(&out);
    assert_eq!(list.as_array().unwrap().len(), 11);
    assert!(list.as_array().unwrap().iter().all(|e| e["identity"].is_string()));

    assert_eq!(code(&vlike(&["verify", "no-such-suite"])), 64);
    assert_eq!(code(&vlike(&["verify"])), 64);
    assert_eq!(code(&vlike(&["verify", "jacobi", "--range", "4"])), 64);
    assert_eq!(code(&vlike(&["verify", "sym-power", "--max-k", "1"])), 64);
    assert_eq!(code(&vlike(&["--help"])), 0);
}
