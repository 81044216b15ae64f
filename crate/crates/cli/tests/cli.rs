//! End-to-end tests of the binary: exit codes, determinism, output schemas.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_imu-preint"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_passes_with_exit_zero() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS lift-condition"));
}

#[test]
fn injected_fault_fails_with_exit_one_and_names_the_invariant() {
    let out = run(&["check", "--inject-fault", "kappa3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("kappa3-identity"),
        "stderr should name the failed invariant: {err}"
    );
}

#[test]
fn check_json_report_matches_schema() {
    let out = run(&["check", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!(report["passed"].as_bool().unwrap());
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    for c in checks {
        assert!(c["name"].is_string());
        assert!(c["passed"].is_boolean());
        assert!(c["millis"].is_number());
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("output file exists")
}

#[test]
fn simulate_is_deterministic_across_runs_and_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let base = ["simulate", "--M", "10", "--seed", "1", "--duration", "0.5"];
    let run_a = bin()
        .args(base)
        .args(["--out", out_a.to_str().unwrap(), "--workers", "1"])
        .output()
        .unwrap();
    assert_eq!(run_a.status.code(), Some(0));
    let run_b = bin()
        .args(base)
        .args(["--out", out_b.to_str().unwrap(), "--workers", "4"])
        .output()
        .unwrap();
    assert_eq!(run_b.status.code(), Some(0));
    assert_eq!(
        read(&out_a.join("consistency.csv")),
        read(&out_b.join("consistency.csv")),
        "reports must be byte-identical regardless of worker count"
    );
    let norm = |p: &Path| read(p);
    assert_eq!(
        norm(&out_a.join("summary.json")),
        norm(&out_b.join("summary.json"))
    );
}

#[test]
fn simulate_with_zero_lambda_flags_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "simulate",
            "--M",
            "3",
            "--lambda",
            "0",
            "--duration",
            "0.2",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("zero effective noise"), "{err}");
    let summary: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("summary.json"))).unwrap();
    assert!(summary["degenerate"].as_bool().unwrap());
}

#[test]
fn euroc_missing_dataset_is_a_usage_error() {
    let out = run(&["euroc", "--dataset", "/nonexistent/dataset"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
}

#[test]
fn fixture_then_euroc_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("synth");
    let out = bin()
        .args([
            "fixture",
            "--out",
            data.to_str().unwrap(),
            "--duration",
            "4",
            "--noise-free",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(data.join("mav0/imu0/data.csv").exists());

    let results = dir.path().join("results");
    let out = bin()
        .args([
            "euroc",
            "--dataset",
            data.to_str().unwrap(),
            "--dt-ij",
            "0.5",
            "--out",
            results.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&read(&results.join("summary.json"))).unwrap();
    let rows = summary["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    // Noise-free data integrated exactly: NEES medians collapse to ~0.
    for row in rows {
        assert!(row["nees"]["median"].as_f64().unwrap() < 1e-6);
    }
    let csv = read(&results.join("segments.csv"));
    assert!(csv.starts_with("dt_ij,t_start,method,nees"));
}

#[test]
fn config_file_is_used_and_cli_overrides_it() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.conf");
    let out_conf = dir.path().join("from-config");
    std::fs::write(
        &config_path,
        format!(
            "# comment line\nm = 4\nseed = 9\nduration = 0.2\nout = {}\n",
            out_conf.display()
        ),
    )
    .unwrap();
    let out = bin()
        .args(["simulate", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&read(&out_conf.join("summary.json"))).unwrap();
    assert_eq!(summary["config"]["realizations"].as_u64(), Some(4));
    assert_eq!(summary["config"]["seed"].as_u64(), Some(9));

    // The CLI flag wins over the config value.
    let out_cli = dir.path().join("from-cli");
    let out = bin()
        .args([
            "simulate",
            "--config",
            config_path.to_str().unwrap(),
            "--M",
            "2",
            "--out",
            out_cli.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&read(&out_cli.join("summary.json"))).unwrap();
    assert_eq!(summary["config"]["realizations"].as_u64(), Some(2));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.conf");
    std::fs::write(&config_path, "realizations = 5\n").unwrap();
    let out = bin()
        .args(["simulate", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}
