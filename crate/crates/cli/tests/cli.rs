use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wignerlift::codec;
use wignerlift::harness::VerificationReport;
use wignerlift::hilbert::{random_unitary, Complex64};
use wignerlift::tensor::BilinearComposition;

const BIN: &str = env!("CARGO_BIN_EXE_wignerlift");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("WIGNERLIFT_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_add1_passes_with_json() {
    let o = run(&["verify", "--props", "ADD1", "--seed", "1", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let r = VerificationReport::from_json(&stdout(&o)).unwrap();
    assert!(r.pass);
    assert_eq!(r.schema, 1);
    assert_eq!(r.propositions.len(), 1);
    assert_eq!(r.environment.master_seed, 1);
}

#[test]
fn verify_text_format_lines() {
    let o = run(&[
        "verify", "--props", "S3,S7", "--trials", "2", "--dims", "2", "--format", "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("PROP S3-totality PASS residual="));
    assert!(lines[1].starts_with("PROP S7-bilinearity PASS residual="));
    assert!(lines[2].starts_with("SUITE PASS"));
}

#[test]
fn env_seed_overrides_flag() {
    let o = Command::new(BIN)
        .args([
            "verify", "--props", "S3", "--trials", "1", "--dims", "2", "--seed", "3",
        ])
        .env("WIGNERLIFT_SEED", "77")
        .output()
        .unwrap();
    let r = VerificationReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.environment.master_seed, 77);
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&[
        "verify",
        "--props",
        "S1",
        "--trials",
        "1",
        "--dims",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let r = VerificationReport::from_json(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(r.pass);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run(&["verify", "--props", "S4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--dims", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["lift"]).status.code(), Some(2));
}

#[test]
fn factor_canonical_2x3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "canonical_2x3.json",
        &codec::encode_bilinear(&BilinearComposition::canonical(2, 3)),
    );
    let out = dir.path().join("iso.json");
    let o = run(&[
        "factor",
        "--bilinear",
        &path,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("H1 pass"));
    assert!(text.contains("H2 bilinear by representation"));
    assert!(text.contains("H3 pass (rank 6)"));
    assert!(text.contains("iso = identity"));
    let iso = codec::decode_isomorphism(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(iso.iso.rows(), 6);
}

#[test]
fn factor_reports_failed_gates() {
    let dir = tempfile::tempdir().unwrap();
    let padded = write(
        dir.path(),
        "padded.json",
        &codec::encode_bilinear(&BilinearComposition::canonical(2, 2).zero_padded(5)),
    );
    let o = run(&["factor", "--bilinear", &padded]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("H3 FAIL (rank 4 of 5)"));

    let mut zeroed = BilinearComposition::canonical(2, 2);
    for k in 0..4 {
        zeroed.set_coeff(k, 1, 1, Complex64::new(0.0, 0.0));
    }
    let zeroed = write(dir.path(), "zeroed.json", &codec::encode_bilinear(&zeroed));
    let o = run(&["factor", "--bilinear", &zeroed]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("H1 FAIL (offending basis pair (1, 1))"));

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"dim_a":2,"dim_b":2,"dim_c":4,"data":[]}"#,
    );
    assert_eq!(run(&["factor", "--bilinear", &bad]).status.code(), Some(2));
}

#[test]
fn tabulate_then_lift() {
    let dir = tempfile::tempdir().unwrap();
    let u = random_unitary(3, 12);
    let matrix = write(dir.path(), "u.json", &codec::encode_matrix(&u));
    let table = dir.path().join("table.json");
    let o = run(&[
        "tabulate",
        "--matrix",
        &matrix,
        "--conjugate",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["lift", "--map", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let l = codec::decode_lift(stdout(&o).trim()).unwrap();
    assert!(l.antilinear());
    assert!(wignerlift::lift::global_phase_distance(l.matrix(), &u) < 1e-12);
}

#[test]
fn lift_not_preserving_exits_1_with_worst_pair() {
    let dir = tempfile::tempdir().unwrap();
    // Nearly parallel columns.
    let map = r#"{"kind":"matrix","matrix":{"rows":2,"cols":2,"data":[[1,0],[1,0],[0,0],[1e-3,0]]},"conjugate_input":false}"#;
    let path = write(dir.path(), "not_preserving.json", map);
    let o = run(&["lift", "--map", &path]);
    assert_eq!(o.status.code(), Some(1));
    let body: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(body["error"], "NotProbabilityPreserving");
    assert_eq!(body["worst_pair"].as_array().unwrap().len(), 2);
}

#[test]
fn lift_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let partial = r#"{"kind":"tabulated","domain_dim":2,"codomain_dim":2,"pairs":[{"in":[[1,0],[0,0]],"out":[[1,0],[0,0]]}]}"#;
    let path = write(dir.path(), "partial.json", partial);
    assert_eq!(run(&["lift", "--map", &path]).status.code(), Some(2));
    let path = write(dir.path(), "garbage.json", "{");
    assert_eq!(run(&["lift", "--map", &path]).status.code(), Some(2));
    assert_eq!(
        run(&["lift", "--map", "/does/not/exist"]).status.code(),
        Some(2)
    );
}
