//! End-to-end checks of the binary: exit codes, output schemas, and
//! determinism of the emitted tables.

use std::path::PathBuf;
use std::process::{Command, Output};

fn steklov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("steklov-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn ball_eigen_hyperbolic_closed_form() {
    let out = steklov(&["ball-eigen", "--space", "H2", "--R", "1"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("space,R,nu1_ratio,nu1_integral,closed_form,agreement\n"));
    let row = stdout.lines().nth(1).unwrap();
    let nu1: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((nu1 - 1.0 / 1.0f64.sinh()).abs() < 1e-10);
}

#[test]
fn ball_eigen_flat_family_with_dimension() {
    let out = steklov(&["ball-eigen", "--space", "Rn", "--n", "3", "--R", "2"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let nu1: f64 = stdout.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((nu1 - 0.5).abs() < 1e-12);
}

#[test]
fn ball_eigen_cayley_reports_agreement() {
    let out = steklov(&["ball-eigen", "--space", "CaH2", "--R", "1"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let agreement: f64 = stdout.lines().nth(1).unwrap().split(',').nth(5).unwrap().parse().unwrap();
    assert!(agreement <= 1e-8);
}

#[test]
fn ball_eigen_is_deterministic() {
    let a = steklov(&["ball-eigen", "--space", "H2", "--R", "0.5,1,2"]);
    let b = steklov(&["ball-eigen", "--space", "H2", "--R", "0.5,1,2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_space_is_usage_error() {
    let out = steklov(&["ball-eigen", "--space", "Klein", "--R", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_of_hyperbolic_ball() {
    let path = tmp_file(
        "ball.json",
        r#"{"ambient": {"kind": "spaceform", "delta": 1.0, "n": 2},
            "rho_fourier": {"a0": 2.0, "a": [], "b": []}}"#,
    );
    let out = steklov(&["spectrum", "--domain", path.to_str().unwrap(), "--modes", "4", "--N", "128"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["N"], 128);
    let eigs = v["eigenvalues"].as_array().unwrap();
    let nu1 = eigs[1].as_f64().unwrap();
    assert!((nu1 - 1.0 / 2.0f64.sinh()).abs() < 1e-8);
    std::fs::remove_file(path).ok();
}

#[test]
fn spectrum_writes_density_csv() {
    let path = tmp_file(
        "disk.json",
        r#"{"ambient": {"kind": "spaceform", "delta": 0.0, "n": 2},
            "rho_fourier": {"a0": 1.0, "a": [], "b": []}}"#,
    );
    let csv_path = std::env::temp_dir().join(format!("steklov-dens-{}.csv", std::process::id()));
    let out = steklov(&[
        "spectrum",
        "--domain",
        path.to_str().unwrap(),
        "--modes",
        "3",
        "--N",
        "64",
        "--densities-csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("theta,mode0,mode1,mode2\n"));
    assert_eq!(csv.lines().count(), 65);
    std::fs::remove_file(path).ok();
    std::fs::remove_file(csv_path).ok();
}

#[test]
fn malformed_domain_json_is_input_error() {
    let path = tmp_file("bad.json", "{\"broken\": ");
    let out = steklov(&["spectrum", "--domain", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    std::fs::remove_file(path).ok();
}

#[test]
fn unknown_verify_suite_is_usage_error() {
    let out = steklov(&["verify", "thm9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_reports_and_passes() {
    let out_dir = std::env::temp_dir().join(format!("steklov-out-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(["verify", "lemma2", "--out", "lemma2.json"])
        .env("STEKLOV_OUT_DIR", &out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["name"], "lemma2");
    assert_eq!(report["pass"], true);
    // The report also landed in the directory named by STEKLOV_OUT_DIR.
    let written = std::fs::read_to_string(out_dir.join("lemma2.json")).unwrap();
    assert_eq!(written, String::from_utf8(out.stdout).unwrap().trim_end_matches('\n'));
    std::fs::remove_dir_all(out_dir).ok();
}
