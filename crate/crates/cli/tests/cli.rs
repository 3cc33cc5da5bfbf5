use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperspectra")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--n", "5", "--r", "6", "--p", "0.5", "analyze"]).status.code(), Some(2));
    assert_eq!(bin(&["--n", "5", "--r", "2", "--p", "0", "analyze"]).status.code(), Some(3));
    let over = ["--n", "2000", "--r", "600", "--p", "0.5", "--engine", "bernoulli", "montecarlo"];
    assert_eq!(bin(&over).status.code(), Some(4));
    assert_eq!(bin(&["--config", "/nonexistent/config.json", "analyze"]).status.code(), Some(5));
    let ok = bin(&["--n", "4", "--r", "2,3", "--p", "0.5,0.5", "--trials", "20000", "verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(json(&ok)["passed"], Value::Bool(true));
}

#[test]
fn analyze_report() {
    let v = json(&bin(&["--n", "5", "--r", "2,3", "--p", "0.5,0.5", "analyze"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "analyze");
    let w: Vec<f64> = v["derived"]["w_fin"].as_array().unwrap().iter().map(f).collect();
    assert!((w[0] - 0.25).abs() < 1e-15 && (w[1] - 0.75).abs() < 1e-15, "{w:?}");
    assert!((f(&v["derived"]["sigma_sq"]) - 1.0).abs() < 1e-15);
    assert_eq!(v["regime"]["label"], "balanced");

    let single = json(&bin(&["--n", "50", "--r", "3", "--p", "0.1", "analyze"]));
    assert!(single["regime"].is_null());
    assert!(f(&single["chatterjee"]["total"]) > 0.0);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    std::fs::write(&path, r#"{"n": 40, "r": [2], "p": [0.2], "seed": 3}"#).unwrap();
    let cfg = path.to_str().unwrap();
    let from_file = json(&bin(&["--config", cfg, "analyze"]));
    assert_eq!(from_file["params"]["n"], 40);
    let flagged = json(&bin(&["--config", cfg, "--n", "60", "analyze"]));
    assert_eq!(flagged["params"]["n"], 60);

    std::fs::write(&path, r#"{"n": 40, "r": [2], "p": [0.2], "colour": 1}"#).unwrap();
    assert_eq!(bin(&["--config", cfg, "analyze"]).status.code(), Some(2));
}

#[test]
fn complete_graph_sample() {
    let out = bin(&["--n", "5", "--r", "2", "--p", "1", "sample"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "5 1");
    assert_eq!(lines[1], "2 10");
    assert_eq!(lines.len(), 12);
}

#[test]
fn sample_then_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let model = ["--n", "30", "--r", "2,3", "--p", "0.2,0.01", "--seed", "11", "--out", out_dir];
    let summary = json(&bin(&[&model[..], &["sample"]].concat()));
    assert_eq!(summary["command"], "sample");
    let file = dir.path().join("hypergraph.txt");
    let out = bin(&[&model[..], &["spectrum", file.to_str().unwrap()]].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let eigs: Vec<f64> = csv.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert_eq!(csv.lines().next(), Some("lambda"));
    assert_eq!(eigs.len(), 30);
    assert!(eigs.windows(2).all(|w| w[0] <= w[1]));
    assert!(eigs.iter().sum::<f64>().abs() < 1e-9);
    assert!(dir.path().join("eigenvalues.csv").exists());

    let mismatch = bin(&["--n", "31", "--r", "2,3", "--p", "0.2,0.01", "spectrum", file.to_str().unwrap()]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn empty_hypergraph_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.txt");
    std::fs::write(&file, "5 1\n2 0\n").unwrap();
    let out = bin(&["--n", "5", "--r", "2", "--p", "0.5", "--format", "json", "spectrum", file.to_str().unwrap()]);
    let eigs: Vec<f64> = json(&out)["eigenvalues"].as_array().unwrap().iter().map(f).collect();
    // Every off-diagonal entry is -μ/√(nσ²), so H = -(μ/√(nσ²))(J - I).
    let a = 0.5 / (5.0_f64 * 0.25).sqrt();
    assert!((eigs[0] + 4.0 * a).abs() < 1e-12);
    assert!(eigs[1..].iter().all(|x| (x - a).abs() < 1e-12), "{eigs:?}");
}

#[test]
fn montecarlo_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let args = ["--n", "200", "--r", "2,2", "--p", "0.3,0.5", "--trials", "3", "--bins", "40"];
    let v = json(&bin(&[&args[..], &["--out", out_dir, "--emit", "json,csv,svg", "montecarlo"]].concat()));
    assert_eq!(v["engine"], "bernoulli");
    assert!((f(&v["s2_pred"]) - 1.0).abs() < 0.02);
    assert_eq!(v["per_trial"].as_array().unwrap().len(), 3);
    let masses: f64 = v["esd_histogram"]["masses"].as_array().unwrap().iter().map(f).sum();
    assert!((masses - 1.0).abs() < 1e-12);
    for name in ["report.json", "esd.svg", "eigenvalues_trial_0.csv", "eigenvalues_trial_2.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let svg = std::fs::read_to_string(dir.path().join("esd.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));

    let csv = bin(&[&args[..], &["--format", "csv", "montecarlo"]].concat());
    assert!(csv.status.success());
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 41);
}

#[test]
fn surrogate_engine_switch() {
    let v = json(&bin(&["--n", "300", "--r", "100", "--p", "0.5", "--trials", "2", "--budget", "1000", "montecarlo"]));
    assert_eq!(v["engine"], "gaussian-surrogate");
    assert_eq!(v["engine_requested"], "auto");
    let (gamma, rho) = (98.0 / 298.0, 98.0 * 97.0 / (298.0 * 297.0));
    let want = 1.0 - 2.0 * gamma + rho;
    assert!((f(&v["theta_sq"]) - want).abs() < 1e-12);
    assert!((want - (1.0 - 98.0 / 298.0_f64).powi(2)).abs() < 5e-3);
    assert!(f(&v["ks_distance"]) < 0.1);
}

#[test]
fn gaussian_profile() {
    let v = json(&bin(&["--n", "200", "--r", "5", "--p", "0.3", "gaussian"]));
    let theta = f(&v["coefficients"]["theta"]);
    let alpha = f(&v["coefficients"]["alpha"]);
    let beta = f(&v["coefficients"]["beta"]);
    assert!((theta * theta + 2.0 * alpha * alpha + beta * beta - 1.0).abs() < 1e-12);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--n", "120", "--r", "2,3", "--p", "0.1,0.01", "--trials", "4", "--seed", "5"];
    let a = bin(&[&args[..], &["--threads", "1", "montecarlo"]].concat());
    let b = bin(&[&args[..], &["--threads", "3", "montecarlo"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = bin(&["--n", "120", "--r", "2,3", "--p", "0.1,0.01", "--trials", "4", "--seed", "6", "montecarlo"]);
    assert_ne!(a.stdout, c.stdout);
}
