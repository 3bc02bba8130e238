use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn whichpath(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whichpath")).args(args).current_dir(dir).output().unwrap()
}

fn experiment(n_qubits: usize, kick_angle: f64, packet_width: f64) -> String {
    format!(
        "[geometry]\nslit_separation = 16.0\npacket_width = {packet_width:?}\npropagation_time = 600.0\n\n\
         [recorder]\nn_qubits = {n_qubits}\nkick_angle = {kick_angle:?}\n"
    )
}

fn sweep(parameter: &str, values: &str, fixed: &str) -> String {
    format!(
        "[sweep]\nparameter = \"{parameter}\"\nvalues = {values}\nparallelism = 3\n\n\
         [base.geometry]\nslit_separation = 16.0\npacket_width = 1.0\npropagation_time = 600.0\n\n\
         [base.recorder]\n{fixed}\n"
    )
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn sweep_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("param_value,gamma_re,gamma_im,visibility,distinguishability,purity,status")
    );
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn coherent_run_summary() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), experiment(3, 0.0, 1.0)).unwrap();
    let out = whichpath(&["run", "c.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let s = summary(dir.path());
    assert!(s["visibility"].as_f64().unwrap() > 0.99);
    assert!((s["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((s["rho"][0][1]["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((s["gamma"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!(s["fringe_spacing"].as_f64().unwrap() > 0.0);
    for (_, v) in s["invariant_checks"].as_object().unwrap() {
        assert_eq!(v, "pass");
    }
    let csv = std::fs::read_to_string(dir.path().join("pattern.csv")).unwrap();
    assert_eq!(csv.lines().count(), 32768 + 1);
}

#[test]
fn decohered_run_summary() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.toml"), experiment(5, PI, 1.0)).unwrap();
    let out = whichpath(&["run", "d.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s = summary(dir.path());
    assert!(s.get("visibility").is_none_or(|v| v.as_f64().unwrap() < 0.01));
    assert!((s["purity"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(s["rho"][0][1]["re"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn invalid_config_exits_1_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), experiment(2, 0.5, -1.0)).unwrap();
    let out = whichpath(&["run", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries, vec![std::ffi::OsString::from("bad.toml")]);

    let unknown = experiment(2, 0.5, 1.0) + "\n[extras]\nfoo = 1\n";
    std::fs::write(dir.path().join("unknown.toml"), unknown).unwrap();
    assert_eq!(whichpath(&["run", "unknown.toml"], dir.path()).status.code(), Some(1));
    assert_eq!(whichpath(&["run", "missing.toml"], dir.path()).status.code(), Some(1));
    assert_eq!(whichpath(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn output_dir_overrides_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let text = experiment(1, 0.3, 1.0) + "\n[outputs]\npattern = \"p.csv\"\nsummary = \"nested/s.json\"\n";
    std::fs::write(dir.path().join("c.toml"), text).unwrap();
    let out = whichpath(&["run", "c.toml", "--output-dir", "results"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("results/p.csv").is_file());
    assert!(dir.path().join("results/nested/s.json").is_file());
    assert!(!dir.path().join("p.csv").exists());
}

#[test]
fn qubit_sweep_matches_product_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let values = format!("{:?}", (0..=10).map(f64::from).collect::<Vec<_>>());
    std::fs::write(dir.path().join("s.toml"), sweep("n_qubits", &values, "n_qubits = 0\nkick_angle = 0.2")).unwrap();
    let out = whichpath(&["sweep", "s.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = sweep_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 11);
    for (m, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<f64>().unwrap(), m as f64);
        // independent oracle: product of single-qubit overlaps
        let expected: f64 = (0..m).map(|_| 0.1f64.cos()).product();
        assert!((row[1].parse::<f64>().unwrap() - expected).abs() < 1e-9, "row {m}");
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(row[6], "ok");
    }
}

#[test]
fn angle_sweep_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let values = format!("[0.0, {PI:?}]");
    std::fs::write(dir.path().join("s.toml"), sweep("kick_angle", &values, "n_qubits = 2\nkick_angle = 0.0")).unwrap();
    assert_eq!(whichpath(&["sweep", "s.toml"], dir.path()).status.code(), Some(0));
    let rows = sweep_rows(&dir.path().join("sweep.csv"));
    assert!(rows[0][3].parse::<f64>().unwrap() > 0.99);
    assert!(rows[1][3].is_empty() || rows[1][3].parse::<f64>().unwrap() < 0.01);
    assert!((rows[1][5].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn sweep_is_independent_of_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    let text = sweep("kick_angle", "[2.5, 0.1, 1.7, 0.9, 3.0, 0.0]", "n_qubits = 4\nkick_angle = 0.0");
    std::fs::write(dir.path().join("parallel.toml"), &text).unwrap();
    std::fs::write(dir.path().join("serial.toml"), text.replace("parallelism = 3", "parallelism = 1\noutput = \"serial.csv\"")).unwrap();
    assert_eq!(whichpath(&["sweep", "parallel.toml"], dir.path()).status.code(), Some(0));
    assert_eq!(whichpath(&["sweep", "serial.toml"], dir.path()).status.code(), Some(0));
    let parallel = std::fs::read(dir.path().join("sweep.csv")).unwrap();
    let serial = std::fs::read(dir.path().join("serial.csv")).unwrap();
    assert_eq!(parallel, serial);
    let rows = sweep_rows(&dir.path().join("sweep.csv"));
    let order: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(order, vec![2.5, 0.1, 1.7, 0.9, 3.0, 0.0]);
}

#[test]
fn invalid_sweeps_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (param, values)) in [("kick_angle", "[]"), ("kick_angle", "[0.5, 4.0]"), ("n_qubits", "[1.5]")].iter().enumerate() {
        let name = format!("s{i}.toml");
        std::fs::write(dir.path().join(&name), sweep(param, values, "n_qubits = 1\nkick_angle = 0.5")).unwrap();
        assert_eq!(whichpath(&["sweep", &name], dir.path()).status.code(), Some(1), "{values}");
    }
    assert!(!dir.path().join("sweep.csv").exists());
}

#[test]
fn failed_sweep_rows_are_marked() {
    // a narrow packet on a coarse grid passes validation but its momentum
    // spectrum reaches the Nyquist edge, which the split-step run rejects
    let dir = tempfile::tempdir().unwrap();
    let text = "[sweep]\nparameter = \"kick_angle\"\nvalues = [0.5, 1.0]\n\n\
        [base.geometry]\nslit_separation = 16.0\npacket_width = 0.5\npropagation_time = 40.0\n\n\
        [base.recorder]\nn_qubits = 1\nkick_angle = 0.0\n\n\
        [base.grid]\nx_min = -256.0\nx_max = 256.0\nn_points = 512\n\n\
        [base.numerics]\nevolution = \"split_step\"\ndt = 0.05\n";
    std::fs::write(dir.path().join("s.toml"), text).unwrap();
    let out = whichpath(&["sweep", "s.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = sweep_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row.len(), 7);
        assert!(row[6].starts_with("error"), "{row:?}");
        assert!(row[1].is_empty());
    }
}

#[test]
fn validate_list_and_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let list = whichpath(&["validate", "--list"], dir.path());
    assert_eq!(list.status.code(), Some(0));
    let names = String::from_utf8(list.stdout).unwrap();
    assert!(names.lines().count() >= 20);
    assert!(names.lines().all(|l| !l.contains(' ')));
    assert!(names.contains("interference.oracle_equivalence"));

    let full = whichpath(&["validate"], dir.path());
    assert_eq!(full.status.code(), Some(0), "{}", String::from_utf8_lossy(&full.stdout));
    let report = String::from_utf8(full.stdout).unwrap();
    assert_eq!(report.lines().filter(|l| l.starts_with("PASS")).count(), names.lines().count());

    let corrupted = whichpath(&["validate", "--corrupt-tolerance", "densmat.matrix_validity"], dir.path());
    assert_eq!(corrupted.status.code(), Some(3));
    let report = String::from_utf8(corrupted.stdout).unwrap();
    let failing: Vec<&str> = report.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0].contains("densmat.matrix_validity"));
}
