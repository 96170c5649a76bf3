use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use frax_cli::grid_file::{parse_grid, render_grid};
use frax_cli::{run_verification_suite, Suite, SuiteConfig, VerificationReport};
use frax_core::grid::sample;
use tempfile::TempDir;

fn frax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frax"))
        .args(args)
        .env_remove("FRAX_THREADS")
        .output()
        .expect("spawn frax")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const SMALL: &[&str] = &["verify", "--suite", "spectral", "--sizes", "16", "--gammas", "0.3,0.7"];

fn write_cosine_grid(dir: &Path, name: &str, sizes: &[usize]) -> String {
    let f = sample(|x| (3.0 * x[0]).cos() + x.get(1).map_or(0.0, |y| (2.0 * y).sin()), sizes, &vec![TAU; sizes.len()])
        .unwrap();
    let path = dir.join(name);
    std::fs::write(&path, render_grid(&f)).unwrap();
    path.to_str().unwrap().to_owned()
}

/// Check outcomes with timings stripped.
fn outcomes(report: &VerificationReport) -> Vec<(String, u64, bool)> {
    report.entries.iter().map(|e| (e.check_id.clone(), e.metric.to_bits(), e.passed)).collect()
}

#[test]
fn verify_json_survives_a_parse_and_reserialize_byte_for_byte() {
    let out = frax(SMALL);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let report = VerificationReport::from_json(&text).unwrap();
    assert_eq!(report.to_json().unwrap() + "\n", text);
}

#[test]
fn verify_is_deterministic_for_a_fixed_seed() {
    let first = VerificationReport::from_json(&stdout(&frax(SMALL))).unwrap();
    let second = VerificationReport::from_json(&stdout(&frax(SMALL))).unwrap();
    assert_eq!(outcomes(&first), outcomes(&second));

    let mut reseeded: Vec<&str> = SMALL.to_vec();
    reseeded.extend(["--seed", "7"]);
    let third = VerificationReport::from_json(&stdout(&frax(&reseeded))).unwrap();
    assert_ne!(outcomes(&first), outcomes(&third), "seed must reach the random inputs");
}

#[test]
fn thread_cap_does_not_change_results() {
    let capped = Command::new(env!("CARGO_BIN_EXE_frax")).args(SMALL).env("FRAX_THREADS", "1").output().unwrap();
    let free = frax(SMALL);
    let a = VerificationReport::from_json(&stdout(&capped)).unwrap();
    let b = VerificationReport::from_json(&stdout(&free)).unwrap();
    assert_eq!(outcomes(&a), outcomes(&b));

    let bad = Command::new(env!("CARGO_BIN_EXE_frax")).args(SMALL).env("FRAX_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn suite_filter_restricts_the_report() {
    let report = VerificationReport::from_json(&stdout(&frax(SMALL))).unwrap();
    assert!(!report.entries.is_empty());
    assert!(report.entries.iter().all(|e| e.check_id.starts_with("spectral.")));
    assert!(report.all_passed());
}

#[test]
fn impossible_tolerance_exits_one() {
    let mut args: Vec<&str> = SMALL.to_vec();
    args.extend(["--tolerance", "1e-99"]);
    let out = frax(&args);
    assert_eq!(out.status.code(), Some(1));
    let report = VerificationReport::from_json(&stdout(&out)).unwrap();
    assert!(report.entries.iter().all(|e| e.tolerance == 1e-99));
    assert!(report.failures().count() > 0);
}

#[test]
fn bad_configuration_exits_two() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"suites": ["spectral"], "sizes": [12]}"#).unwrap();
    assert_eq!(frax(&["verify", "--config", config.to_str().unwrap()]).status.code(), Some(2));

    std::fs::write(&config, "{ not json").unwrap();
    assert_eq!(frax(&["verify", "--config", config.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(frax(&["verify", "--suite", "astrology"]).status.code(), Some(2));
    assert_eq!(frax(&["verify", "--config", "/nonexistent/frax.json"]).status.code(), Some(2));
    assert_eq!(frax(&["frac-apply", "--gamma"]).status.code(), Some(2));
}

#[test]
fn config_file_is_honoured_and_csv_is_available() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(&config, r#"{"suites": ["specfun"], "gammas": [0.4], "seed": 3}"#).unwrap();
    let out = frax(&["--format", "csv", "verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("check_id,metric,tolerance,passed,runtime_ms,params\n"));
    assert!(text.contains("\"specfun.normalization_identity[gamma=0.4]\""));
    assert!(!text.contains("spectral."));
}

#[test]
fn frac_apply_scales_a_cosine_by_its_symbol() {
    let dir = TempDir::new().unwrap();
    let input = write_cosine_grid(dir.path(), "f.txt", &[32]);
    let output = dir.path().join("g.txt");
    let out = frax(&["frac-apply", "--gamma", "0.5", "--input", &input, "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let f = parse_grid(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let g = parse_grid(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert!(g.rel_diff(&f.scale(3.0)) < 1e-13);
}

#[test]
fn frac_apply_json_output_and_dimension_errors() {
    let dir = TempDir::new().unwrap();
    let line = write_cosine_grid(dir.path(), "line.txt", &[16]);
    let out = frax(&["--format", "json", "frac-apply", "--gamma", "0.25", "--input", &line]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["sizes"], serde_json::json!([16]));
    assert_eq!(doc["values"].as_array().unwrap().len(), 16);

    let out = frax(&["frac-apply", "--gamma", "0.25", "--gamma2", "0.5", "--input", &line]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extend_reaches_the_boundary_and_decays() {
    let dir = TempDir::new().unwrap();
    let plane = write_cosine_grid(dir.path(), "p.txt", &[16, 16]);
    let near = frax(&["extend", "--gamma", "0.3,0.6", "--height", "1e-9,1e-9", "--input", &plane]);
    assert_eq!(near.status.code(), Some(0), "{}", String::from_utf8_lossy(&near.stderr));
    let f = parse_grid(&std::fs::read_to_string(&plane).unwrap()).unwrap();
    assert!(parse_grid(&stdout(&near)).unwrap().max_abs_diff(&f) < 1e-4);

    let far = frax(&["extend", "--gamma", "0.5", "--height", "2", "--input", &plane]);
    assert!(parse_grid(&stdout(&far)).unwrap().max_abs() < 0.1 * f.max_abs());

    let mismatched = frax(&["extend", "--gamma", "0.5", "--height", "1,2", "--input", &plane]);
    assert_eq!(mismatched.status.code(), Some(2));
}

#[test]
fn scatter_writes_four_entries_and_a_summary() {
    let dir = TempDir::new().unwrap();
    let plane = write_cosine_grid(dir.path(), "p.txt", &[16, 16]);
    let out_dir = dir.path().join("quad");
    let out = frax(&["scatter", "--gamma1", "0.5", "--gamma2", "0.5", "--input", &plane, "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["s11", "s12", "s21", "s22"] {
        let entry = parse_grid(&std::fs::read_to_string(out_dir.join(format!("{name}.csv"))).unwrap()).unwrap();
        assert_eq!(entry.sizes(), &[16, 16]);
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["method"], "spectral");
}

#[test]
fn radial_and_kernel_tables() {
    let out = frax(&["radial", "--model", "hyperboloid", "--n", "2", "--gamma", "0.4", "--points", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "r,solution,residual");
    assert_eq!(rows.len(), 6);
    for row in &rows[1..] {
        let residual: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(residual < 1e-10, "{row}");
    }

    let mass = frax(&["--format", "json", "kernel", "--mode", "mass", "--n", "1", "--gamma", "0.5", "--height", "0.7"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&mass)).unwrap();
    assert!((doc["mass"].as_f64().unwrap() - 1.0).abs() < 1e-8);

    let missing_x = frax(&["kernel", "--mode", "eval", "--n", "2", "--gamma", "0.5", "--height", "1", "--x", "0.1"]);
    assert_eq!(missing_x.status.code(), Some(2));
}

#[test]
fn default_suite_passes_in_full() {
    let report = run_verification_suite(&SuiteConfig::default()).unwrap();
    let failures: Vec<_> = report.failures().map(|e| (&e.check_id, e.metric, e.tolerance)).collect();
    assert!(failures.is_empty(), "{failures:#?}");
    for suite in Suite::ALL {
        assert!(report.entries.iter().any(|e| e.check_id.starts_with(&format!("{suite}."))));
    }
}
