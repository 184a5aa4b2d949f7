use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use logical_entropy::io::{MatrixFile, MatrixKind};
use logical_entropy::sampling::sample_density;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("stdout is not one JSON document ({e}): {text}"))
}

fn f(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v["results"][key].as_f64().unwrap_or_else(|| panic!("missing {key}"))
}

#[test]
fn entropy_of_fixtures() {
    let out = qle(&["entropy", "--in", f(&fixture("maximally_mixed_qubit.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(num(&json(&out), "logical_entropy"), 0.5);

    let out = qle(&["entropy", "--in", f(&fixture("pure_zero.json"))]);
    assert_eq!(num(&json(&out), "logical_entropy"), 0.0);

    let out = qle(&[
        "entropy",
        "--in",
        f(&fixture("plus.json")),
        "--pvm",
        f(&fixture("computational_pvm_2.json")),
    ]);
    let v = json(&out);
    assert!((num(&v, "pvm_logical_entropy") - 0.5).abs() < 1e-12);
    assert!((num(&v, "divergence_to_measured") - 0.5).abs() < 1e-12);
}

#[test]
fn coarse_pvm_file() {
    let out = qle(&[
        "entropy",
        "--in",
        f(&fixture("maximally_mixed_qutrit.json")),
        "--pvm",
        f(&fixture("coarse_pvm_3.json")),
    ]);
    let v = json(&out);
    assert!((num(&v, "pvm_logical_entropy") - 4.0 / 9.0).abs() < 1e-12);
    assert_eq!(v["results"]["pvm_non_degenerate"], Value::Bool(false));
}

#[test]
fn divergence_cases() {
    let zero = fixture("pure_zero.json");
    let one = fixture("pure_one.json");
    let v = json(&qle(&["divergence", "--in", f(&zero), "--in", f(&one)]));
    assert!((num(&v, "divergence") - 2.0).abs() < 1e-12);
    assert!(num(&v, "fidelity").abs() < 1e-12);
    let v = json(&qle(&["divergence", "--in", f(&zero), "--in", f(&zero)]));
    assert_eq!(num(&v, "divergence"), 0.0);
}

#[test]
fn random_pair_divergence_forms_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, MatrixFile::from_density(&sample_density(1, 3, None).unwrap()).to_json()).unwrap();
    std::fs::write(&b, MatrixFile::from_density(&sample_density(2, 3, None).unwrap()).to_json()).unwrap();
    let v = json(&qle(&["divergence", "--in", f(&a), "--in", f(&b)]));
    let forms = &v["results"]["divergence_forms"];
    let d = forms["definitional"].as_f64().unwrap();
    assert!((d - forms["hilbert_schmidt"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn relative_reports_factor_mismatch() {
    let out = qle(&["relative", "--in", f(&fixture("bell.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"]["relative_logical_entropy"];
    assert_eq!(r["matches_unit_factor"], Value::Bool(true));
    assert_eq!(r["matches_quarter_factor"], Value::Bool(false));

    let out = qle(&["relative", "--in", f(&fixture("maximally_mixed_qubit.json"))]);
    assert_eq!(out.status.code(), Some(3));
    let out = qle(&["relative", "--in", f(&fixture("maximally_mixed_qubit.json")), "--dims", "2,2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn postselect_cases() {
    let pvm = fixture("computational_pvm_2.json");
    let v = json(&qle(&[
        "postselect",
        "--pre",
        f(&fixture("ket_plus.json")),
        "--post",
        f(&fixture("ket_plus_i.json")),
        "--pvm",
        f(&pvm),
    ]));
    assert!((num(&v, "postselected_logical_entropy") - 0.5).abs() < 1e-12);
    let lw = &v["results"]["weak_logical_entropy"];
    assert!((lw[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["results"]["relation_diagnostic"]["agree"], Value::Bool(false));
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);

    let zero = fixture("ket_zero.json");
    let v = json(&qle(&["postselect", "--pre", f(&zero), "--post", f(&zero), "--pvm", f(&pvm)]));
    assert_eq!(num(&v, "postselected_logical_entropy"), 0.0);
    assert_eq!(v["results"]["weak_logical_entropy"][0].as_f64(), Some(0.0));

    let out = qle(&["postselect", "--pre", f(&zero), "--post", f(&fixture("ket_one.json")), "--pvm", f(&pvm)]);
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(json(&out)["error"]["exit_code"], Value::from(6));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sample_cases() {
    let v = json(&qle(&[
        "sample",
        "--in",
        f(&fixture("pure_zero.json")),
        "--pvm",
        f(&fixture("computational_pvm_2.json")),
        "--trials",
        "1000",
    ]));
    assert_eq!(num(&v, "estimate"), 0.0);
    assert_eq!(num(&v, "z_score"), 0.0);

    for (state, pvm) in [("plus.json", "computational_pvm_2.json"), ("maximally_mixed_qutrit.json", "computational_pvm_3.json")] {
        let v = json(&qle(&["sample", "--in", f(&fixture(state)), "--pvm", f(&fixture(pvm)), "--seed", "5"]));
        assert!(num(&v, "z_score").abs() <= 4.0);
        assert_eq!(v["seed"], Value::from(5));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(qle(&["entropy", "--in", f(&garbage)]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(qle(&["entropy", "--in", f(&missing)]).status.code(), Some(2));

    let bad_trace = dir.path().join("bad.json");
    std::fs::write(&bad_trace, r#"{"kind":"density","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
    assert_eq!(qle(&["entropy", "--in", f(&bad_trace)]).status.code(), Some(3));

    let out = qle(&[
        "divergence",
        "--in",
        f(&fixture("pure_zero.json")),
        "--in",
        f(&fixture("maximally_mixed_qutrit.json")),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = qle(&["entropy", "--in", f(&fixture("plus.json")), "--pvm", f(&fixture("computational_pvm_3.json"))]);
    assert_eq!(out.status.code(), Some(4));

    // one structured candidate (GHZ) cannot witness a violation
    let out = qle(&["verify", "--prop", "ssa", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["results"]["propositions"][0]["status"], "no_counterexample_found");

    assert_eq!(qle(&["verify", "--prop", "13"]).status.code(), Some(2));
    assert_eq!(qle(&["verify", "--dims", "1"]).status.code(), Some(3));
}

#[test]
fn verify_single_proposition() {
    let out = qle(&["verify", "--prop", "1b", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let p = &v["results"]["propositions"][0];
    assert_eq!(p["status"], "verified");
    assert_eq!(p["trials"], Value::from(1));
    assert_eq!(v["seed"], Value::from(0));
}

#[test]
fn verify_ssa_serializes_witness() {
    let out = qle(&["verify", "--prop", "ssa", "--trials", "100000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let w = &json(&out)["results"]["propositions"][0]["witness"];
    assert!(w["reverified_violation"].as_f64().unwrap() > 1e-6);
    assert_eq!(w["matrix"].as_array().unwrap().len(), 8);
}

#[test]
fn written_files_round_trip_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let rho = sample_density(4, 4, None).unwrap().with_dims(vec![2, 2]).unwrap();
    let path = dir.path().join("rho.json");
    std::fs::write(&path, MatrixFile::from_density(&rho).to_json()).unwrap();
    let parsed = MatrixFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed.kind, MatrixKind::Density);
    assert_eq!(parsed.density().unwrap(), rho);
    assert_eq!(qle(&["relative", "--in", f(&path)]).status.code(), Some(0));
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "--prop", "2,7,ssa", "--trials", "200", "--seed", "3"];
    let a = qle(&args);
    let b = qle(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "inputs_digest", "results", "seed", "version", "warnings"]);
}
