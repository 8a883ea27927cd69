//! End-to-end checks of the command-line surface: exit codes, artifact
//! formats and byte-for-byte reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cluster-gas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cluster-gas")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cluster-gas-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn graph_counts_and_cap_exit_code() {
    let out = run(&["graphs", "--n", "4", "--class", "biconnected"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "10");

    let out = run(&["graphs", "--n", "5", "--class", "trees"]);
    assert_eq!(stdout(&out).trim(), "125");

    let out = run(&["graphs", "--n", "9", "--class", "connected"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_dump_is_canonical() {
    let dir = temp_dir("dump");
    let dump = dir.join("graphs.txt");
    let out = run(&[
        "graphs",
        "--n",
        "3",
        "--class",
        "connected",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# cluster-gas v"));
    assert_eq!(lines.next(), Some("n:3 edges:1-2,1-3"));
    assert_eq!(text.lines().count(), 5);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn beta_json_has_exact_value_and_metadata() {
    let out = run(&["beta", "--n", "2"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["op"], "irreducible-coefficient");
    assert!((record["value"].as_f64().unwrap() + 1.5).abs() < 1e-12);
    assert_eq!(record["method"], "exact");
    assert!(record["params"]["config_hash"].is_string());
}

#[test]
fn kp_report_values_and_convergence_exit_code() {
    let out = run(&["kp-report", "--rho", "0.05", "--a", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let delta_prime = report["delta_prime"].as_f64().unwrap();
    assert!((delta_prime - 0.27182818).abs() < 1e-6);
    assert_eq!(report["geometric_converges"], true);

    // a divergent density exits with the convergence code
    let out = run(&["kp-report", "--rho", "10.0", "--a", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn free_energy_scan_matches_stirling_for_ideal_gas() {
    let dir = temp_dir("scan");
    let pot = dir.join("ideal.toml");
    std::fs::write(&pot, "kind = \"ideal\"\n").unwrap();
    let out = run(&[
        "free-energy-scan",
        "--rho",
        "0.1",
        "--ell",
        "100,200",
        "--bc",
        "periodic",
        "--potential",
        pot.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# cluster-gas v"));
    assert_eq!(
        lines.next().unwrap(),
        "bc,ell,n,log_z_per_vol,series,error,err_corrected,ell_err_corrected,note"
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let ell: f64 = cols[1].parse().unwrap();
        let n: f64 = cols[2].parse().unwrap();
        let error: f64 = cols[5].parse().unwrap();
        // ideal gas: |error| equals the Stirling correction up to the
        // correction's own O(N^-3) remainder, and the corrected column is
        // zero at the same order
        let stirling = ((2.0 * std::f64::consts::PI * n).sqrt().ln() + 1.0 / (12.0 * n)) / ell;
        assert!((error.abs() - stirling).abs() < 1e-7, "{line}");
        let corrected: f64 = cols[6].parse().unwrap();
        assert!(corrected.abs() < 1e-6, "{line}");
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn jammed_rows_are_flagged() {
    let out = run(&["free-energy-scan", "--rho", "1.5", "--ell", "4", "--bc", "periodic"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.ends_with("jammed")), "{text}");
}

#[test]
fn decay_csv_is_byte_identical_across_reruns() {
    let args = [
        "decay", "--n", "2", "--ell", "10", "--r", "2,3", "--sweeps", "20000", "--stride", "4",
        "--seed", "7",
    ];
    let a = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("seed=7"));
    assert_eq!(lines.next(), Some("r,truncated,stderr,envelope,pass"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn correlations_reports_closed_form_value() {
    let out = run(&[
        "correlations", "--n", "2", "--ell", "10", "--q1", "0", "--q2", "2.0", "--eta", "0.05",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["psi"]["c00"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let t = v["truncated_two_point"]["value"].as_f64().unwrap();
    assert!((t - 0.25).abs() < 0.005, "{t}");
}

#[test]
fn config_file_defaults_are_applied_and_overridden() {
    let dir = temp_dir("config");
    let cfg = dir.join("experiment.toml");
    std::fs::write(
        &cfg,
        "seed = 11\n\n[potential]\nkind = \"hard-core\"\nrange = 1.0\n\n[thermo]\nbeta = 1.0\nrho = 0.05\n",
    )
    .unwrap();
    let out = run(&["kp-report", "--config", cfg.to_str().unwrap(), "--a", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["rho"].as_f64().unwrap(), 0.05);
    assert_eq!(report["meta"]["seed"].as_u64().unwrap(), 11);
    // flags override the file
    let out = run(&["kp-report", "--config", cfg.to_str().unwrap(), "--rho", "0.02", "--a", "1"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["rho"].as_f64().unwrap(), 0.02);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = temp_dir("out");
    let path = dir.join("beta.json");
    let out = run(&["beta", "--n", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let record: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((record["value"].as_f64().unwrap() + 2.0).abs() < 1e-12);
    std::fs::remove_dir_all(dir).ok();
}
