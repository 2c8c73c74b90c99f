//! End-to-end checks of the installed binary: exit-status contract,
//! byte-identical reruns, config handling, and fault injection.

use std::path::Path;
use std::process::{Command, Output};

fn hyers_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyers-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn selftest_exits_zero() {
    let out = hyers_lab(&["selftest"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("invariant,detail,pass"));
}

#[test]
fn injected_fault_exits_nonzero_and_names_the_invariant() {
    let out = hyers_lab(&["selftest", "--inject-fault", "zeta-branch"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("counterexample closed form matches series oracle,")
            && text.contains(",false"),
        "fault must surface as a named failing invariant:\n{text}"
    );
}

#[test]
fn threshold_refusal_is_a_usage_error() {
    let out = hyers_lab(&["approx", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));
}

#[test]
fn defect_violations_drive_the_exit_status() {
    // constant control vs linearly growing defect on a wide box
    let out = hyers_lab(&[
        "defect",
        "--function",
        "abs-product",
        "--r",
        "0",
        "--samples",
        "200",
        "--grid",
        "-64:64:9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = hyers_lab(&[
            "approx",
            "--eps",
            "0.1",
            "--samples",
            "100",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    assert!(!bytes_a.is_empty());
}

#[test]
fn json_reports_parse_as_row_arrays() {
    let out = hyers_lab(&["constants", "--n", "2", "--format", "json"]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 18);
    assert!(rows[0].get("kappa").is_some());
}

#[test]
fn config_file_is_honored_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("scenario.toml");
    std::fs::write(
        &cfg_path,
        "n = 2\neps = 6.0\ndelta = [1.0]\nc = 0.0\nsamples = 500\n",
    )
    .unwrap();
    let report_path = dir.path().join("report.csv");
    let out = hyers_lab(&[
        "threshold",
        "--config",
        cfg_path.to_str().unwrap(),
        "--delta",
        "10",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report_path).unwrap();
    // the flag override replaced the file's delta sweep
    assert!(text.contains("witness,1.0000000000000000e1"));
    assert!(!text.contains("witness,1.0000000000000000e0,"));
    assert!(text.contains("# rng: chacha8"));
    assert!(text.contains("# seed: 24301"));
}

#[test]
fn header_carries_tool_and_config_hash(/* determinism of attribution */) {
    let out = hyers_lab(&["constants", "--n", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let hash_line = text.lines().find(|l| l.starts_with("# config: ")).unwrap();
    assert_eq!(hash_line.len(), "# config: ".len() + 16);
    assert!(text.starts_with("# tool: hyers-lab "));
}

#[test]
fn missing_config_file_is_a_usage_error() {
    assert!(!Path::new("definitely-missing.toml").exists());
    let out = hyers_lab(&["defect", "--config", "definitely-missing.toml"]);
    assert_eq!(out.status.code(), Some(2));
}
