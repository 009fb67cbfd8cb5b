//! Contract tests for the CLI surface: exit codes, output formats, and
//! file-handling behavior.  Exit code map: 0 success, 1 usage error,
//! 2 numerical failure, 3 failed checks / precondition violations.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opial-lab"))
        .args(args)
        .output()
        .expect("CLI binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["constant", "--help"])), 0);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    assert_eq!(code(&run(&["constant"])), 1);
}

#[test]
fn out_of_domain_exponent_is_a_usage_error_with_cited_requirement() {
    let out = run(&["constant", "--p", "0.5"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("p > 1"),
        "diagnostic must cite the exponent requirement: {}",
        stderr(&out)
    );
}

#[test]
fn invalid_sweep_range_is_a_usage_error() {
    assert_eq!(code(&run(&["sweep", "--p-min", "3", "--p-max", "2"])), 1);
    assert_eq!(
        code(&run(&["sweep", "--p-min", "1", "--p-max", "3", "--steps", "1"])),
        1
    );
    assert_eq!(code(&run(&["sweep", "--p-min", "0.5", "--p-max", "3"])), 1);
}

#[test]
fn eigenvalue_mismatch_at_p_equal_one_is_a_numerical_failure() {
    // p = 1 admits a nontrivial solution only at mu = pi^2 / L^2.
    let out = run(&["extremal", "--p", "1", "--mu", "5", "--L", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("eigenvalue"), "got: {}", stderr(&out));
}

#[test]
fn failed_bound_exits_three_but_still_reports() {
    let out = run(&["bounds", "--p", "3", "--lambda", "1", "--L", "1"]);
    assert_eq!(code(&out), 3);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["report"]["holds"], serde_json::Value::Bool(false));
}

#[test]
fn holding_bound_exits_zero() {
    let out = run(&["bounds", "--p", "3", "--lambda", "1", "--L", "3.14159265358979"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["report"]["holds"], serde_json::Value::Bool(true));
}

#[test]
fn verify_passes_on_clean_corpus() {
    let out = run(&["verify", "wirtinger", "--samples", "20", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("20/20 samples passed"));
}

#[test]
fn verify_mean_zero_uses_an_exactly_mean_zero_corpus() {
    let out = run(&["verify", "meanzero", "--samples", "20", "--seed", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("20/20 samples passed"));
}

#[test]
fn verify_writes_per_sample_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    let out = run(&[
        "verify", "chain", "--samples", "5", "--seed", "9", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sample,name,lhs,rhs,constant,ratio,holds,margin"
    );
    // Three chain links per sample.
    assert_eq!(lines.count(), 15);
}

#[test]
fn refuses_overwrite_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    std::fs::write(&path, "precious\n").unwrap();
    let out = run(&[
        "bounds", "--p", "3", "--L", "3.14159265358979", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--force"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "precious\n");

    let forced = run(&[
        "bounds", "--p", "3", "--L", "3.14159265358979", "--out",
        path.to_str().unwrap(), "--force",
    ]);
    assert_eq!(code(&forced), 0);
    assert!(std::fs::read_to_string(&path).unwrap().contains("check_report"));
}

#[test]
fn extremal_writes_profile_csv_and_json_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ground_state.csv");
    let out = run(&[
        "extremal", "--p", "3", "--mu", "1", "--L", "1", "--n", "500", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("x,u\n"));
    assert_eq!(csv.lines().count(), 502); // header + 501 nodes

    let sidecar = std::fs::read_to_string(dir.path().join("ground_state.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&sidecar).unwrap();
    assert_eq!(doc["kind"], "extremal_profile");
    // Profile samples belong to the CSV, not the sidecar.
    assert!(doc["report"].get("profile").is_none());
    assert!(doc["report"].get("values").is_none());
    // The computed mu must be adjudicated by the amplitude-scaling
    // prediction, not the exponent-flipped variant.
    let mu = doc["report"]["mu"].as_f64().unwrap();
    let scaling = doc["report"]["mu_predicted_scaling"].as_f64().unwrap();
    let flipped = doc["report"]["mu_predicted_flipped"].as_f64().unwrap();
    assert!((scaling - mu).abs() < 1e-6 * mu);
    assert!((flipped - mu).abs() > 10.0 * mu);
}

#[test]
fn sweep_emits_exact_column_header_in_p_order() {
    let out = run(&["sweep", "--p-min", "1", "--p-max", "2", "--steps", "3", "--n", "128"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,L,c_maximized,c_closed_form,c_paper_printed,rel_diff_max_closed,rel_diff_max_printed,iterations,converged"
    );
    let ps: Vec<f64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ps, vec![1.0, 1.5, 2.0]);
}

#[test]
fn sweep_includes_linear_consistency_row() {
    let out = run(&["sweep", "--p-min", "1", "--p-max", "3", "--steps", "2", "--n", "256"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let c_max: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    let c_closed: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((c_closed - 0.10132118364233777).abs() < 1e-12);
    assert!((c_max - c_closed).abs() / c_closed < 1e-4);
}

#[test]
fn constant_csv_format_matches_sweep_layout() {
    let out = run(&["constant", "--p", "2", "--n", "256", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("p,L,c_maximized,"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn constant_human_summary_goes_to_stdout_when_writing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = run(&["constant", "--p", "2", "--n", "256", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("c_maximized"));
    assert!(text.contains("c_paper_printed"));
    assert!(Path::new(&path).exists());
}

#[test]
fn non_convergence_is_a_numerical_failure_but_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.json");
    let out = run(&[
        "constant", "--p", "3", "--n", "256", "--max-iter", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("did not converge"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["report"]["converged"], serde_json::Value::Bool(false));
}
