use std::path::PathBuf;
use std::process::{Command, Output};

use cohering::coherence::{c_r, DensityMatrix};
use cohering::doc::{matrix_from_doc, ChannelSpecDocument, MatrixDoc};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohering"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn power_of_sample_channels() {
    let h = data("hadamard.json");
    let v = json_of(&["power", h.to_str().unwrap(), "--measure", "l1"]);
    assert!((num(&v, "s_value") - 1.0).abs() <= 1e-12);
    let d = data("dismiss.json");
    assert_eq!(num(&json_of(&["power", d.to_str().unwrap()]), "s_value"), 0.0);
    let a = data("append_plus.json");
    assert!((num(&json_of(&["power", a.to_str().unwrap()]), "s_value") - 1.0).abs() <= 1e-12);
}

#[test]
fn power_text_output() {
    let out = run(&["power", data("hadamard.json").to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("s_value: "));
    assert!(text.contains("measure: l1"));
}

#[test]
fn gpower_examples() {
    let h = data("hadamard.json");
    let v = json_of(&["gpower", h.to_str().unwrap(), "--measure", "l1", "--seed", "7"]);
    assert!((num(&v, "s_hat_value") - 1.0).abs() <= 1e-4);
    assert_eq!(v["diagnostics"]["lower_bound"], Value::Bool(true));
    assert!(v["s_hat_witness"].is_array());

    let u1 = data("u1.json");
    let v = json_of(&["gpower", u1.to_str().unwrap(), "--measure", "relent"]);
    assert!(num(&v, "s_hat_value") >= 0.0190 - 2e-3);
    assert!(num(&v, "s_hat_value") > num(&v, "s_value"));

    let id = data("identity.json");
    let v = json_of(&["gpower", id.to_str().unwrap(), "--restarts", "8", "--tol", "1e-10"]);
    assert!(num(&v, "s_hat_value") <= 1e-8);
}

#[test]
fn gpower_is_reproducible() {
    let u1 = data("u1.json");
    let args = ["gpower", u1.to_str().unwrap(), "--measure", "relent", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn dilation_examples() {
    for (name, tol) in [("hadamard.json", 1e-12), ("phase_flip.json", 1e-8), ("dephasing.json", 1e-8)] {
        let p = data(name);
        let v = json_of(&["dilate", p.to_str().unwrap(), "--check-states", "10"]);
        assert!(num(&v, "reconstruction_error") <= tol, "{name}");
        let d = if name == "dephasing.json" { 3 } else { 2 };
        assert_eq!(v["ancilla_dim"].as_u64().unwrap() as usize, d * d);
        assert_eq!(v["big_unitary"].as_array().unwrap().len(), d * d * d);
    }
}

#[test]
fn dilation_rejects_dimension_changing_channels() {
    let out = run(&["dilate", data("append_plus.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn circuit_bounds() {
    let cases = [("all_h3.json", 3, 7.0, 7.0), ("cnot_only.json", 0, 0.0, 0.0), ("hh.json", 2, 3.0, 0.0)];
    for (name, count, bound, exact) in cases {
        let p = data(name);
        let v = json_of(&["circuit-bound", p.to_str().unwrap()]);
        assert_eq!(v["hadamard_count"].as_u64(), Some(count));
        assert_eq!(num(&v, "bound"), bound);
        assert!((num(&v, "exact") - exact).abs() <= 1e-9, "{name}");
    }
}

#[test]
fn verify_counterexample_case() {
    let out = run(&["verify", "--case", "P7_COUNTEREXAMPLE"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS P7_COUNTEREXAMPLE"));
    assert!(text.contains("S = 0.00298") && text.contains("gain = 0.0190"));
}

#[test]
fn verify_entropy_tensor_case() {
    let v = json_of(&["verify", "--case", "EQ4_RENT_TENSOR", "--seed", "11"]);
    assert_eq!(v["cases"][0]["failures"], 0);
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn verify_quick_profile_is_deterministic() {
    let args = ["verify", "--profile", "quick", "--seed", "5", "--output", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = run(&["power", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));

    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, "{\"type\": \"unitary\", \"u\": ").unwrap();
    let out = run(&["power", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));

    let lossy = dir.path().join("lossy.json");
    std::fs::write(&lossy, r#"{"type": "kraus", "ops": [[[0.9, 0], [0, 0.9]]]}"#).unwrap();
    let out = run(&["power", lossy.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid"));

    assert_eq!(run(&["power"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--case", "NOPE"]).status.code(), Some(1));
    assert_eq!(run(&["power", "--measure", "l2", "x.json"]).status.code(), Some(1));
}

#[test]
fn serialized_witness_replays() {
    let u1 = data("u1.json");
    let v = json_of(&["gpower", u1.to_str().unwrap(), "--measure", "relent", "--seed", "1"]);
    let doc: MatrixDoc = serde_json::from_value(v["s_hat_witness"].clone()).unwrap();
    let rho = DensityMatrix::new(matrix_from_doc(&doc).unwrap()).unwrap();
    let op = ChannelSpecDocument::parse(&std::fs::read_to_string(&u1).unwrap())
        .unwrap()
        .to_operation()
        .unwrap();
    let gain = c_r(&op.apply(&rho).unwrap()) - c_r(&rho);
    assert!((gain - num(&v, "s_hat_value")).abs() <= 1e-12);
}
