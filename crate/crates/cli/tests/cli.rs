use std::path::Path;
use std::process::{Command, Output};

use fermient_core::angular::{coupled_state, SpinLabel};
use fermient_core::states::{slater_n, werner_state, DensityMatrixJson};
use fermient_core::{ComplexMatrix, DensityMatrix};
use serde_json::Value;

fn fermient(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermient"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_of(matrix: &ComplexMatrix) -> String {
    let rows = (0..matrix.rows())
        .map(|i| {
            (0..matrix.cols())
                .map(|j| [matrix[(i, j)].re, matrix[(i, j)].im])
                .collect()
        })
        .collect();
    serde_json::to_string(&DensityMatrixJson {
        n: 4,
        particles: 2,
        matrix: rows,
    })
    .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn werner_table_row() {
    let out = fermient(&["table", "werner"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("family,indicator,p_min\n"));
    assert!(text.contains("werner,r_inf,0.400000000"), "{text}");
    assert!(text.contains("werner,concurrence,0.400000000"), "{text}");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn dim6_table_row() {
    let out = fermient(&["table", "dim6-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dim6-1,d_l,0.801783726"), "{text}");
    assert!(!text.contains("concurrence"));
}

#[test]
fn theta_table_reports_full_detection() {
    let out = fermient(&["table", "theta"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("all entangled θ detected"));
    let text = stdout(&out);
    assert!(text.starts_with("theta,d_vn,d_l,r_2,r_inf,concurrence\n"));
    assert_eq!(text.lines().count(), 52);
}

#[test]
fn unknown_family_is_a_usage_error() {
    let out = fermient(&["table", "bell"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bell"));
    assert_eq!(fermient(&["sweep", "theta"]).status.code(), Some(1));
    assert_eq!(fermient(&["figure", "3"]).status.code(), Some(1));
    assert_eq!(fermient(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fermient(&["--help"]).status.code(), Some(0));
}

#[test]
fn figure_one_columns() {
    let out = fermient(&["figure", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,werner,gisin"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 100);
    assert_eq!(rows[0][0], "1.00000000");
    assert!((rows[0][1].parse::<f64>().unwrap() - 0.809).abs() < 2e-3);
    assert_eq!(rows[99], ["inf", "0.400000000", "0.500000000"]);
    for col in 1..3 {
        let values: Vec<f64> = rows.iter().map(|r| r[col].parse().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-6));
    }
}

#[test]
fn figure_two_at_q_two() {
    let out = fermient(&["figure", "2", "--q-start", "1", "--q-stop", "3", "--q-count", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("q,dim6-1,dim6-2,dim6-3\n"));
    let row = text.lines().find(|l| l.starts_with("2.00000000,")).unwrap();
    let phi1: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((phi1 - 0.535).abs() < 2e-3);
}

#[test]
fn sweep_without_infinity() {
    let out = fermient(&[
        "sweep",
        "gisin",
        "--q-count",
        "3",
        "--q-stop",
        "3",
        "--include-inf",
        "false",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("q,p_min"));
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains("inf"));
}

#[test]
fn output_is_deterministic_and_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let first = fermient(&["sweep", "dim6-2", "--q-count", "7"]);
    let second = fermient(&["sweep", "dim6-2", "--q-count", "7"]);
    assert_eq!(first.stdout, second.stdout);
    let out = fermient(&["sweep", "dim6-2", "--q-count", "7", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn analyze_singlet() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "singlet.json", &werner_state(1.0).unwrap().to_json_string());
    let out = fermient(&["analyze", &input, "--q-count", "3", "--q-stop", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let verdicts = &report["verdicts"];
    for key in ["d_vn", "d_l", "r_inf", "concurrence"] {
        assert_eq!(verdicts[key], "entangled", "{key}");
    }
    assert!(verdicts["r_values"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v == "entangled"));
    assert_eq!(report["r_values"].as_array().unwrap().len(), 4);
    assert_eq!(report["r_values"][3]["q"], "inf");
}

#[test]
fn analyze_slater_determinant() {
    let dir = tempfile::tempdir().unwrap();
    let rho = DensityMatrix::from_pure(4, 2, &slater_n(4, &[1, 2]).unwrap()).unwrap();
    let input = write(dir.path(), "slater.json", &rho.to_json_string());
    let out = fermient(&["analyze", &input]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["concurrence"].as_f64().unwrap().abs() < 1e-9);
    for key in ["d_vn", "d_l", "r_inf"] {
        assert!(report[key].as_f64().unwrap() <= 1e-9, "{key}");
    }
    assert!(report["r_values"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["value"].as_f64().unwrap() <= 1e-9));
}

#[test]
fn analyze_rejects_non_psd_state() {
    let s = SpinLabel::new(3).unwrap();
    let singlet = coupled_state(s, 0, 0).unwrap().outer();
    let quintet = coupled_state(s, 2, 2).unwrap().outer();
    let bad = &singlet.scale_real(1.2) - &quintet.scale_real(0.2);
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", &json_of(&bad));
    let out = fermient(&["analyze", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], "NegativeEigenvalue");
    assert!(err["message"].as_str().is_some());
}

#[test]
fn analyze_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "broken.json", "{\"n\": 4");
    let out = fermient(&["analyze", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], "ParseError");

    // Weight outside the antisymmetric sector.
    let mut symmetric = ComplexMatrix::zeros(16, 16);
    symmetric[(0, 0)] = 1.0.into();
    let input = write(dir.path(), "bosonic.json", &json_of(&symmetric));
    let out = fermient(&["analyze", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], "InvalidState");
}

#[test]
fn nfermion_cross_check() {
    let out = fermient(&["nfermion", "--N", "2", "--k", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("closed form: 0.400000000"), "{text}");
    assert!(text.contains("numeric:     0.400000000"), "{text}");
    let diff: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("difference:"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(diff < 1e-6);

    let text = stdout(&fermient(&["nfermion", "--N", "3", "--k", "2"]));
    assert!(text.contains("closed form: 0.473684211"), "{text}");
}

#[test]
fn nfermion_guard_and_errors() {
    let out = fermient(&["nfermion", "--N", "4", "--k", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("closed form:"));
    assert!(text.contains("skipped"), "{text}");
    assert_eq!(fermient(&["nfermion", "--N", "2", "--k", "1"]).status.code(), Some(1));
}

#[test]
fn selftest_runs() {
    let out = fermient(&["selftest", "--seed", "42", "--count", "1000", "--n", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("samples = 1000"));
    assert!(text.trim_end().ends_with("ok"));

    let out = fermient(&["selftest", "--count", "0"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));

    let out = fermient(&["selftest", "--count", "50", "--n", "6"]);
    assert!(out.status.success());
    assert_eq!(fermient(&["selftest", "--n", "5"]).status.code(), Some(1));
}
