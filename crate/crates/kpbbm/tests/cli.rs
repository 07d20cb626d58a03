//! Black-box tests of the `kpbbm` binary: flag handling, config layering,
//! document formats, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn kpbbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpbbm"))
        .args(args)
        .output()
        .expect("binary must launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn equilibria_round_trips_through_json() {
    let out = kpbbm(&[
        "equilibria",
        "--a",
        "-1",
        "--b",
        "1",
        "--k",
        "-1",
        "--c",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equilibria"][0]["kind"], "saddle");
    assert_eq!(v["equilibria"][1]["point"]["phi"].as_f64().unwrap(), 1.0);
    assert_eq!(v["homoclinic_regime"], true);
}

#[test]
fn degenerate_speed_exits_with_two() {
    let out = kpbbm(&["equilibria", "--c", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("degenerate: c=k+1"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn analysis_negative_exits_with_three() {
    // The viscous term alone never changes sign, so no root exists.
    let out = kpbbm(&["speed", "--variant", "none"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).contains("no sign change"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn unknown_variant_is_rejected() {
    let out = kpbbm(&["melnikov", "--variant", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn melnikov_csv_is_machine_readable() {
    let out = kpbbm(&[
        "melnikov", "--c-min", "0.25", "--c-max", "1.0", "--c-step", "0.25",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.contains('\r'), "documents are LF-only");
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "c,delta,reference");
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        for f in &fields {
            let x: f64 = f.parse().expect("every field parses as f64");
            assert!(x.is_finite());
            // 17 significant digits in scientific notation.
            let mantissa = f.split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
        rows += 1;
    }
    assert_eq!(rows, 4);
}

#[test]
fn speed_reports_the_local_root() {
    let out = kpbbm(&["speed", "--variant", "local", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c_star = v["c_star"].as_f64().unwrap();
    assert!((c_star - (7.0f64 / 12.0).sqrt()).abs() < 1e-10);
}

#[test]
fn persist_emits_the_exact_header() {
    let out = kpbbm(&["persist", "--tau-ladder", "2e-3", "--variant", "local"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tau,c_hat,error");
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row[0], 2e-3);
    assert!((row[1] - (7.0f64 / 12.0).sqrt()).abs() < 1e-4);
    assert!(lines.next().is_none());
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{ "c": 2.0, "tau": 0.004, "format": "json" }"#).unwrap();
    let path = path.to_str().unwrap();

    // File alone: c = 2 from the file.
    let out = kpbbm(&["equilibria", "--config", path]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["params"]["c"].as_f64().unwrap(), 2.0);
    assert_eq!(v["params"]["tau"].as_f64().unwrap(), 0.004);

    // A flag beats the file; untouched file entries survive.
    let out = kpbbm(&["equilibria", "--config", path, "--c", "1.5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["params"]["c"].as_f64().unwrap(), 1.5);
    assert_eq!(v["params"]["tau"].as_f64().unwrap(), 0.004);
}

#[test]
fn malformed_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{ "c": 2.0, "mystery_knob": 7 }"#).unwrap();
    let out = kpbbm(&["equilibria", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eq.json");
    let out = kpbbm(&["equilibria", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).is_empty(), "document must not leak to stdout");
    let text = std::fs::read_to_string(Path::new(path.to_str().unwrap())).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["homoclinic_regime"], true);
}

#[test]
fn portrait_blocks_are_blank_line_separated() {
    let out = kpbbm(&[
        "portrait",
        "--xi-min",
        "-8",
        "--xi-max",
        "8",
        "--xi-step",
        "0.25",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("xi,phi,psi\n"));
    assert_eq!(
        text.split("\n\n").count(),
        7,
        "homoclinic + 3 periodic + 3 outer"
    );
}

#[test]
fn kernel_check_csv_format() {
    let out = kpbbm(&["kernel-check", "--tau", "0.5", "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "metric,value");
    assert!(lines.next().unwrap().starts_with("strong_mass_error,"));
}
