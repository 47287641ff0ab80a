//! End-to-end runs of the command-line front end.

use std::path::{Path, PathBuf};

use aereg::engine::generate_not_ae_regular;
use aereg::random::{small_interval, stream_rng};
use aereg::{IntervalMatrix, Matrix, QIMatrix, Quantifier, Rational};
use aereg_cli::parse::{format_matrix_file, parse_matrix_file};
use aereg_cli::report::Report;
use aereg_cli::{run_with, EXIT_CONCLUSIVE, EXIT_INCONCLUSIVE, EXIT_USAGE};
use proptest::prelude::*;
use rand::Rng;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("aereg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_file(task: &str, path: &Path, extra: &[&str]) -> (i32, String, String) {
    let mut args = vec![task, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn json_report(task: &str, path: &Path, extra: &[&str]) -> (i32, Report) {
    let mut args = vec!["--format", "json", "--no-meta"];
    args.extend_from_slice(extra);
    let (code, out, err) = run_file(task, path, &args);
    assert!(err.is_empty(), "{err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn check_ae_on_the_exists_column_counterexample() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.qim", "qim 2 2\n0 [-1,1]E\n0 [-1,1]E\n");
    let (code, report) = json_report("check-ae", &path, &[]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert_eq!(report.status, "NOT_AE_REGULAR");
    assert_eq!(report.method.as_deref(), Some("no-forall/strong-singularity"));
    assert_eq!(report.certificate["forall_witness"], serde_json::json!([["0", "0"], ["0", "0"]]));
    assert!(report.meta.is_none());
}

#[test]
fn check_ae_on_the_decimal_example() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.qim", "qim 2 2\n[0.8,1]E [-1,0]A\n-1 1\n");
    let (code, report) = json_report("check-ae", &path, &[]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert_eq!((report.status.as_str(), report.method.as_deref()), ("AE_REGULAR", Some("structured-row")));
}

#[test]
fn strong_singular_prints_a_witness_vertex() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.qim", "qim 2 2\n[-1,1]A [-1,1]A\n[-1,1]A [-1,1]A\n");
    let (code, out, _) = run_file("strong-singular", &path, &[]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert!(out.contains("status: NO"), "{out}");
    assert!(out.contains("witness vertex: "), "{out}");
    let (code, report) = json_report("strong-singular", &path, &[]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert_eq!(report.certificate["vertex"].as_str().unwrap().len(), 4);

    let (code, report) = json_report("strong-singular", &path, &["--budget", "2"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(report.status, "BUDGET_EXCEEDED");
}

#[test]
fn classify_identity() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "id.qim", "qim 3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let (code, out, _) = run_file("classify", &path, &["--no-meta"]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert!(out.contains("M-matrix (some member): true"), "{out}");
    assert!(out.contains("H-matrix (some member): true"), "{out}");
    assert!(out.contains("inverse-nonnegative (every member): true"), "{out}");
    let (_, report) = json_report("classify", &path, &[]);
    assert_eq!(report.certificate["strong_inverse_nonnegative"], true);
    assert_eq!(report.certificate["weak_m_matrix"]["holds"], true);
}

#[test]
fn regularity_statuses() {
    let dir = TempDir::new().unwrap();
    let reg = write(&dir, "r.qim", "qim 2 2\n[3/5,7/5]A [-2/5,2/5]A\n[-2/5,2/5]A [3/5,7/5]A\n");
    let (code, report) = json_report("regularity", &reg, &[]);
    assert_eq!((code, report.status.as_str()), (EXIT_CONCLUSIVE, "REGULAR"));
    assert_eq!(report.certificate["min_abs_determinant"], "1/5");
    let sing = write(&dir, "s.qim", "qim 2 2\n[2/5,8/5]A [-3/5,3/5]A\n[-3/5,3/5]A [2/5,8/5]A\n");
    let (code, report) = json_report("regularity", &sing, &[]);
    assert_eq!((code, report.status.as_str()), (EXIT_CONCLUSIVE, "NOT_REGULAR"));
}

#[test]
fn unknown_verdict_exits_with_two() {
    // AE regular, but outside every exact branch, so the honest answer is unknown
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "u.qim", "qim 2 2\n[0,1]E [1,3/2]E\n[0,1]A [0,1/2]E\n");
    let (code, report) = json_report("check-ae", &path, &["--starts", "4", "--iters", "50"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(report.status, "UNKNOWN");
    assert_eq!(report.diagnostics["falsifier"]["starts"], 4);
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    for seed in 0..4 {
        let (q, _) = generate_not_ae_regular::<Rational>(3, seed);
        let path = write(&dir, &format!("g{seed}.qim"), &format_matrix_file(&q));
        let args = ["--format", "json", "--no-meta", "--seed", "7"];
        let a = run_file("check-ae", &path, &args);
        let b = run_file("check-ae", &path, &args);
        assert_eq!(a, b);
        let report: Report = serde_json::from_str(&a.1).unwrap();
        assert_eq!(report.status, "NOT_AE_REGULAR", "{}", a.1);
    }
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.qim", "qim 1 1\n[-1,1]E\n");
    let target = dir.path().join("report.json");
    let (code, out, _) = run_file("check-ae", &path, &["--format", "json", "--out", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert!(out.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(report.status, "AE_REGULAR");
    assert!(report.meta.is_some());
}

#[test]
fn usage_and_parse_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.qim", "qim 2 2\n1 [0,1]A\n1 [0;1]A\n");
    let (code, _, err) = run_file("check-ae", &bad, &[]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(run(&["no-such-task"]).0, EXIT_USAGE);
    assert_eq!(run(&["check-ae"]).0, EXIT_USAGE);
    assert_eq!(run(&["explore-conjecture", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_CONCLUSIVE);
}

#[test]
fn explorer_writes_one_record_per_line() {
    let args = ["explore-conjecture", "1", "--trials", "25", "--max-n", "3", "--seed", "5", "--format", "json"];
    let (code, out, _) = run(&args);
    assert_eq!(code, EXIT_CONCLUSIVE);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 26);
    for line in &lines[..25] {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["seed"], 5);
    }
    let summary: serde_json::Value = serde_json::from_str(lines[25]).unwrap();
    assert_eq!(summary["summary"]["trials"], 25);
    assert_eq!(run(&args).1, out);

    let (code, out, _) = run(&["explore-conjecture", "2", "--trials", "10", "--max-n", "3", "--starts", "2", "--iters", "20"]);
    assert_eq!(code, EXIT_CONCLUSIVE);
    assert!(out.starts_with("conjecture 2 (seed 0): 10 trials"), "{out}");
}

fn random_qim(seed: u64) -> QIMatrix<Rational> {
    let mut rng = stream_rng(seed, 0);
    let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let base = Matrix::from_fn(m, n, |_, _| small_interval::<Rational, _>(&mut rng, 3, &[0, 1, 3]));
    let quants = Matrix::from_fn(m, n, |_, _| if rng.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall });
    QIMatrix::new(IntervalMatrix::new(base), quants).unwrap()
}

proptest! {
    #[test]
    fn format_then_parse_round_trips(seed in any::<u64>()) {
        let q = random_qim(seed);
        let parsed = parse_matrix_file(&format_matrix_file(&q)).unwrap();
        prop_assert_eq!(&parsed, &q.normalized());
        prop_assert_eq!(parse_matrix_file(&format_matrix_file(&parsed)).unwrap(), parsed);
    }
}
