use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn qaccred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaccred")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_manifest_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = qaccred(&["accredit", "--manifest", path(&data("manifest.json")), "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["report.json", "traps.csv"] {
        let got = std::fs::read_to_string(dir.path().join(file)).unwrap();
        let want = std::fs::read_to_string(data("golden").join(file)).unwrap();
        assert_eq!(got, want, "{file} differs from golden copy");
    }
}

#[test]
fn noiseless_bound_is_theta_over_k() {
    let dir = tempfile::tempdir().unwrap();
    let out = qaccred(&[
        "accredit",
        "--circuit",
        path(&data("cnot_circuit.json")),
        "--theta",
        "0.2",
        "--alpha",
        "0.9",
        "--protocol",
        "tau",
        "--out",
        path(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["trap_failures"], 0);
    assert!((report["bound"].as_f64().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn flags_override_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = qaccred(&["accredit", "--manifest", path(&data("manifest.json")), "--theta", "1", "--alpha", "0.5", "--out", path(dir.path())]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["n_traps"], 4);
    assert_eq!(report["config"]["protocol"], "xy-strong");
}

#[test]
fn malformed_circuit_names_the_field() {
    let out = qaccred(&["accredit", "--circuit", path(&data("malformed_circuit.json")), "--theta", "0.2", "--alpha", "0.9", "--protocol", "xy"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("malformed_circuit.json") && err.contains("ops[0].kind"), "{err}");
}

#[test]
fn syntax_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"qubits\": 2,\n  \"ops\": [,]\n}").unwrap();
    let out = qaccred(&["accredit", "--circuit", path(&bad), "--theta", "0.2", "--alpha", "0.9", "--protocol", "xy"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn gate_family_mismatch_is_a_validation_error() {
    let out = qaccred(&["accredit", "--circuit", path(&data("cnot_circuit.json")), "--theta", "0.2", "--alpha", "0.9", "--protocol", "xy"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ops[1]") || String::from_utf8_lossy(&out.stderr).contains("XY"));
}

#[test]
fn verify_writes_soundness_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = qaccred(&["verify", "--manifest", path(&data("manifest.json")), "--runs", "4", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["runs"], 4);
    assert_eq!(std::fs::read_to_string(dir.path().join("runs.csv")).unwrap().lines().count(), 5);
}

#[test]
fn verify_robustness_against_perturbed_noise() {
    let dir = tempfile::tempdir().unwrap();
    let out = qaccred(&[
        "verify",
        "--manifest",
        path(&data("manifest.json")),
        "--compare",
        path(&data("noise_perturbed.json")),
        "--out",
        path(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("robustness.json")).unwrap()).unwrap();
    assert_eq!(v["status"], "consistent");
    assert_eq!(v["differing_sites"], 3);
}

#[test]
fn search_finds_cnot() {
    let out = qaccred(&["search-decomposition", "--gate", "cnot"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["found"], true);
    assert!(v["best_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn search_rejects_non_unitary_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let row = |i: usize| (0..4).map(|j| if i == j { "[2, 0]" } else { "[0, 0]" }).collect::<Vec<_>>().join(", ");
    std::fs::write(&m, format!("[[{}], [{}], [{}], [{}]]", row(0), row(1), row(2), row(3))).unwrap();
    let out = qaccred(&["search-decomposition", "--matrix", path(&m)]);
    assert_eq!(out.status.code(), Some(1));
}
