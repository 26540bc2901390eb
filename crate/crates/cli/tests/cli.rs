use std::process::{Command, Output};

use harmonic_eisenstein::eisenstein::{harmonic_expansion, ExpansionJson};
use harmonic_eisenstein::{HarmonicExpansion, LatticeContext};
use serde_json::Value;

fn heis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heis"))
        .args(args)
        .output()
        .expect("spawn heis")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn coeffs_csv_level_three() {
    let out = heis(&[
        "coeffs", "--level", "3", "--h", "1,0", "--mmax", "9", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let ms: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(ms, ["0", "3", "6", "9"]);
    let c: Vec<(&str, &str)> = rows.iter().map(|r| (r[1], r[2])).collect();
    assert_eq!(c, [("1", "6"), ("1", "1"), ("0", "1"), ("1", "1")]);
    assert_eq!(rows[1][4], "-1*log(3)");
}

#[test]
fn level_one_is_zero() {
    let out = heis(&["coeffs", "--level", "1", "--mmax", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for row in v["c"].as_array().unwrap() {
        assert_eq!(row["num"], 0);
    }
    for row in v["c_tilde"].as_array().unwrap() {
        assert_eq!(row["value"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn all_cosets_json() {
    let out = heis(&[
        "coeffs", "--level", "3", "--h", "all", "--mmax", "6", "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let blocks = v.as_array().unwrap();
    assert_eq!(blocks.len(), 9);
    assert!(blocks.iter().all(|b| b["N"] == 3 && b["m_max"] == 6));
}

#[test]
fn json_round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    let out = heis(&[
        "coeffs",
        "--level",
        "4",
        "--h",
        "1,2",
        "--mmax",
        "25",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: ExpansionJson =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let parsed = HarmonicExpansion::from_json(&json).unwrap();
    let ctx = LatticeContext::new(4).unwrap();
    let direct = harmonic_expansion(&ctx, ctx.coset(1, 2), 25).unwrap();
    assert_eq!(parsed, direct);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"level": 5, "h": "2,0", "mmax": 10, "format": "json"}"#,
    )
    .unwrap();
    let out = heis(&["coeffs", "--config", path.to_str().unwrap(), "--mmax", "15"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["N"], 5);
    assert_eq!(v["h"], serde_json::json!([2, 0]));
    assert_eq!(v["m_max"], 15);
}

#[test]
fn eval_reports_tails_within_tolerance() {
    let out = heis(&[
        "eval", "--level", "3", "--h", "1,0", "--tau", "0.1,1.2", "--tol", "1e-10", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &v[0];
    assert!(row["vartheta_tail"].as_f64().unwrap() <= 1e-10);
    assert!(row["vartheta_tilde_tail"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn weil_json_shape() {
    let out = heis(&["weil", "--level", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mats = v.as_array().unwrap();
    assert_eq!(mats.len(), 4);
    let s = &mats[1];
    let entries = s["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().all(|row| row.as_array().unwrap().len() == 4));
    assert!((entries[0][0][0].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(
        s["cosets"],
        serde_json::json!([[0, 0], [0, 1], [1, 0], [1, 1]])
    );
}

#[test]
fn kernel_grid_csv() {
    let out = heis(&[
        "kernel", "--level", "2", "--h", "1,0", "--tau", "0.2,0.9", "--tau", "-0.3,1.4", "--t",
        "0.8,1.3", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn verify_suite_filter() {
    let out = heis(&[
        "verify", "--level", "3", "--suite", "weil", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(!lines.is_empty());
    assert!(lines
        .iter()
        .all(|l| l["check"] == "weil-relations" && l["passed"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(heis(&["coeffs", "--bogus"]).status.code(), Some(2));
    assert_eq!(heis(&["coeffs", "--level", "0"]).status.code(), Some(2));
    assert_eq!(heis(&["coeffs", "--h", "1"]).status.code(), Some(2));
    assert_eq!(heis(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(heis(&["eval", "--tau", "0,-1"]).status.code(), Some(2));
    assert_eq!(heis(&["kernel", "--eps", "0.7"]).status.code(), Some(2));
}

#[test]
fn short_expansion_fails_certification() {
    let out = heis(&[
        "eval", "--level", "3", "--mmax", "3", "--tau", "0,0.2", "--tol", "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
