use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvotex"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn csv_rows(dir: &Path, name: &str) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join(name))
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn stability_table_matches_closed_forms() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["stability", "--table", "--n-max", "7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(dir.path(), "stability_table.csv");
    assert_eq!(rows[0][..3], ["n", "b_n", "b_n_reciprocal"]);
    let b: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!((b[0] - (2.0 - 3f64.sqrt())).abs() < 1e-8);
    assert!((b[1] - (3.0 - 8f64.sqrt())).abs() < 1e-8);
    assert!((b[2] - (9.0 - 80f64.sqrt())).abs() < 1e-8);
    assert!(b[3].abs() < 1e-8);
}

#[test]
fn samples_report_failing_modes() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["stability", "--n-min", "6", "--n-max", "6", "--x", "0.2,-0.5"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(dir.path(), "stability_samples.csv");
    assert_eq!(rows[1][2], "linearly_unstable");
    assert_eq!(rows[1][3], "2;3");
    assert_eq!(rows[2][2], "stable");
}

#[test]
fn reruns_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        assert_eq!(code(&run(dir.path(), &["bifurcations", "--n", "6", "--n-max", "9"])), 0);
        assert_eq!(code(&run(dir.path(), &["--format", "json", "probe", "--n", "7"])), 0);
    }
    for name in ["bifurcations.csv", "bifurcations.manifest.json", "probe.json", "probe.manifest.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn manifest_lists_parameters_and_outputs() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["bifurcations", "--n", "8"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("bifurcations.csv") && stdout.contains("bifurcations.manifest.json"));
    let m = read_json(dir.path(), "bifurcations.manifest.json");
    assert_eq!(m["command"], "bifurcations");
    assert_eq!(m["parameters"]["n"], 8);
    assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["outputs"][0], "bifurcations.csv");
    let rows = csv_rows(dir.path(), "bifurcations.csv");
    let ells: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(ells, ["4", "3", "2"]);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    // Usage errors.
    assert_eq!(code(&run(dir.path(), &["no-such-command"])), 2);
    assert_eq!(code(&run(dir.path(), &["probe", "--n", "3"])), 2);
    assert_eq!(
        code(&run(dir.path(), &["normal-form", "--k", "4", "--alpha", "1", "--beta", "-1", "--u", "1"])),
        2
    );
    assert_eq!(
        code(&run(dir.path(), &["simulate", "--config", "missing.json", "--t-end", "1", "--dt", "0.1"])),
        2
    );
    // Domain error: a ring on the equator.
    assert_eq!(code(&run(dir.path(), &["spectrum", "--n", "6", "--x", "1"])), 3);
    // Unwritable output directory.
    let file = dir.path().join("plain-file");
    fs::write(&file, "").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_curvotex"))
        .arg("--out-dir")
        .arg(file.join("sub"))
        .args(["stability"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn spectrum_reports_classification() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["spectrum", "--n", "6", "--x", "0.2"])), 0);
    let v = read_json(dir.path(), "spectrum.json");
    assert_eq!(v["classification"]["classification"], "linearly_unstable");
    assert_eq!(v["criterion_stable"], false);
    assert_eq!(code(&run(dir.path(), &["spectrum", "--n", "4", "--x", "0.1", "--greens", "pole"])), 0);
    let v = read_json(dir.path(), "spectrum.json");
    assert_eq!(v["classification"]["classification"], "stable");
}

#[test]
fn probe_heptagon() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["probe", "--n", "7"])), 0);
    let v = read_json(dir.path(), "probe.json");
    assert_eq!(v["extends_known_results"], false);
    assert_eq!(v["report"]["verdict"], "stable_degenerate");
    assert!(v["report"]["odd_data"]["delta"].as_f64().unwrap() > 0.0);
}

#[test]
fn probe_quartic_is_labelled() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["probe", "--n", "8", "--ell", "2"])), 0);
    let v = read_json(dir.path(), "probe_quartic.json");
    assert_eq!(v["extends_known_results"], true);
    assert_eq!(v["mode_quartic"]["k"], 4);
}

#[test]
fn normal_form_outputs() {
    let dir = TempDir::new().unwrap();
    let args = ["normal-form", "--k", "3", "--alpha", "1", "--beta", "1", "--u", "1", "--grid", "11"];
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let grid = csv_rows(dir.path(), "normal_form_grid.csv");
    assert_eq!(grid.len(), 1 + 121);
    let crit = csv_rows(dir.path(), "normal_form_critical.csv");
    // Origin plus three symmetric saddles.
    assert_eq!(crit.len(), 1 + 4);
    assert!(crit[2..].iter().all(|r| r[3] == "saddle"));
}

fn gallery_ring(dir: &Path, n: &str) {
    let out = run(dir, &["gallery", "--n", n, "--ell", "2", "--eps", "0", "--branch", "m"]);
    assert_eq!(code(&out), 0);
}

fn simulate(dir: &Path, t_end: &str, mode: &str) -> Value {
    let config = dir.join("gallery_config.json");
    let out = run(
        dir,
        &[
            "--strict",
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--t-end",
            t_end,
            "--dt",
            "0.05",
            "--stride",
            "400",
            "--perturb-mode",
            mode,
            "--perturb-eps",
            "1e-4",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    read_json(dir, "simulate_summary.json")
}

#[test]
fn stable_pentagon_stays_close() {
    let dir = TempDir::new().unwrap();
    gallery_ring(dir.path(), "5");
    // 50 rotation periods of the flat unit pentagon (omega = 1/(2 pi)).
    let s = simulate(dir.path(), "1974", "2");
    assert!(s["rotation_periods"].as_f64().unwrap() >= 50.0 - 1e-3);
    assert!(s["max_ring_deviation"].as_f64().unwrap() < 10.0 * 1e-4);
    for d in s["max_relative_drift"].as_array().unwrap() {
        assert!(d.as_f64().unwrap() < 1e-8);
    }
    let header = csv_rows(dir.path(), "trajectory.csv")[0].clone();
    assert_eq!(header.len(), 1 + 10 + 4);
}

#[test]
fn unstable_octagon_departs() {
    let dir = TempDir::new().unwrap();
    gallery_ring(dir.path(), "8");
    let s = simulate(dir.path(), "200", "4");
    assert!(s["max_ring_deviation"].as_f64().unwrap() > 100.0 * 1e-4);
}

#[test]
fn gallery_branch_symmetry() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["gallery", "--n", "8", "--ell", "2", "--eps", "0.01", "--branch", "m-prime"]);
    assert_eq!(code(&out), 0);
    let v = read_json(dir.path(), "gallery_symmetry.json");
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["subgroup"].as_array().unwrap().len(), 4);
    let c = read_json(dir.path(), "gallery_config.json");
    assert_eq!(c["vortices"].as_array().unwrap().len(), 8);
    // Odd k has no m' branch.
    let out = run(dir.path(), &["gallery", "--n", "6", "--ell", "2", "--eps", "0.01", "--branch", "m-prime"]);
    assert_eq!(code(&out), 2);
}
