use std::path::PathBuf;

use mzv_verify::{run_with, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mzv-verify").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn shuffle_prints_the_polynomial() {
    let (code, out, _) = run(&["shuffle", "AB", "AB"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.trim(), "+4·AABB +2·ABAB");
}

#[test]
fn shuffle_rejects_bad_words() {
    let (code, _, err) = run(&["shuffle", "AXB", "AB"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("error"));
}

#[test]
fn lemma2_default_grid_passes() {
    let (code, out, _) = run(&["verify-lemma2", "--p-max", "5", "--q-max", "5"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.ends_with("verify-lemma2: 36 passed, 0 failed\n"));
}

#[test]
fn theorem_single_cell_passes() {
    let (code, out, _) = run(&["verify-theorem", "--m", "1", "--n", "1", "--rtol", "1e-8"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.starts_with("PASS m=1 n=1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify-lemma2", "--p-max", "x"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify-identities", "--family", "odd"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["verify-theorem", "--m", "1", "--n", "1", "--rtol", "-1"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["discover-recurrence", "--m", "1", "--family", "all"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&[]).0, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("verify-lemma2"));
}

#[test]
fn missing_certificate_file_exits_two() {
    let (code, _, err) = run(&["check-certificate", "--file", "missing.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("missing.json"));
}

#[test]
fn malformed_certificate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"order": 1, "coeffs": [["1"]], "families": {}}"#).unwrap();
    assert_eq!(
        run(&["check-certificate", "--file", path.to_str().unwrap()]).0,
        EXIT_USAGE
    );
}

#[test]
fn certificate_fixtures() {
    let (code, out, _) = run(&[
        "check-certificate",
        "--file",
        &fixture("classical_binomial.json"),
    ]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let (code, out, _) = run(&[
        "check-certificate",
        "--file",
        &fixture("classical_binomial_perturbed.json"),
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("first failing"));
}

#[test]
fn failing_cells_exit_one_and_name_the_counterexample() {
    let (code, out, _) = run(&["verify-initial", "--quiet"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.starts_with("FAIL m=2 n=2 expected -1, L = 0, R = 0\n"));
}

#[test]
fn quiet_hides_passing_cells() {
    let (_, out, _) = run(&[
        "verify-reduction",
        "--k-max",
        "3",
        "--m-max",
        "3",
        "--quiet",
    ]);
    assert_eq!(out, "verify-reduction: 9 passed, 0 failed\n");
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &[
            "check-certificate",
            "--file",
            &fixture("classical_binomial.json"),
            "--samples",
            "8",
            "--seed",
            "7",
        ],
        &["verify-x", "--n-max", "2"],
        &["discover-recurrence", "--m", "3"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = dir.path().join(format!("a{i}.json"));
        let b = dir.path().join(format!("b{i}.json"));
        for path in [&a, &b] {
            let mut argv = args.to_vec();
            argv.extend(["--json", path.to_str().unwrap()]);
            run(&argv);
        }
        let a = std::fs::read(a).unwrap();
        assert_eq!(a, std::fs::read(b).unwrap());
        let report: Value = serde_json::from_slice(&a).unwrap();
        for field in ["suite", "config", "cells", "summary"] {
            assert!(report.get(field).is_some(), "missing {field}");
        }
    }
}

#[test]
fn seed_changes_sample_points_not_verdict() {
    let file = fixture("classical_binomial_perturbed.json");
    let (_, a, _) = run(&["check-certificate", "--file", &file, "--seed", "1"]);
    let (_, b, _) = run(&["check-certificate", "--file", &file, "--seed", "2"]);
    assert_ne!(a, b);
    assert!(a.starts_with("FAIL") && b.starts_with("FAIL"));
}

#[test]
fn identities_json_records_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    let (code, _, _) = run(&[
        "verify-identities",
        "--family",
        "binom-odd",
        "--m-max",
        "2",
        "--n-max",
        "2",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["summary"]["pass"], 4);
    let cell = &report["cells"][0];
    assert_eq!(cell["key"], "binom-odd m=1 n=1");
    assert_eq!(cell["data"]["lhs"], "-1");
    assert_eq!(cell["data"]["rhs"], "-1");
}

#[test]
fn wz_fixture_for_m1_passes_and_its_perturbation_fails() {
    use mzv_shuffle::exact::certificate::Certificate;
    use mzv_shuffle::exact::poly::IntPolynomial;

    let file = fixture("wz_m1.json");
    let (code, out, _) = run(&["check-certificate", "--file", &file, "--samples", "4"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.ends_with("check-certificate: 3 passed, 0 failed\n"));

    let mut cert = Certificate::from_file(std::path::Path::new(&file)).unwrap();
    let mut c0 = cert.coeffs[0].coeffs().to_vec();
    c0[1] += 1;
    cert.coeffs[0] = IntPolynomial::new(c0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perturbed.json");
    std::fs::write(&path, cert.to_json()).unwrap();
    let (code, out, _) = run(&[
        "check-certificate",
        "--file",
        path.to_str().unwrap(),
        "--samples",
        "4",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(out.matches("FAIL").count(), 3);
}
