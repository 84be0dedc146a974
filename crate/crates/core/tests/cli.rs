use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ksearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksearch")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Small synthetic data so runs take milliseconds.
const DATA: [&str; 8] = ["--synthetic-days", "20", "--window", "288", "--stride", "144", "--seed", "4"];

fn with_data<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&DATA);
    v.extend_from_slice(extra);
    v
}

#[test]
fn pareto_curve_starts_at_worst_case() {
    let o = ksearch(&["pareto", "--pmin", "5", "--pmax", "50", "--k", "20", "--points", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# ksearch "));
    assert_eq!(lines.next(), Some("lambda,gamma,eta"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert!((first[1] - 2.1587).abs() < 1e-3 && first[1] == first[2]);
    assert_eq!(lines.last(), Some("0,10,1"));
}

#[test]
fn thresholds_report_the_case() {
    let o = ksearch(&["thresholds", "--prediction", "25", "--eta", "1.52", "--gamma", "2.63"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let head = text.lines().next().unwrap();
    assert!(head.contains("case=III") && head.contains("j_star=8"), "{head}");
    assert_eq!(text.lines().count(), 2 + 20);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(ksearch(&["pareto", "--pmin", "50", "--pmax", "5"]).status.code(), Some(2));
    assert_eq!(ksearch(&["thresholds", "--prediction", "80"]).status.code(), Some(2));
    assert_eq!(ksearch(&["pareto", "--kind", "both"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "timestamp,price\n1,10\n2,oops\n").unwrap();
    let o = ksearch(&["simulate", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains('3'));
    let missing = dir.path().join("missing.csv");
    assert_eq!(ksearch(&["simulate", "--input", missing.to_str().unwrap()]).status.code(), Some(3));
}

fn run_to(dir: &Path, name: &str, args: Vec<&str>) -> String {
    let path = dir.join(name);
    let mut args = args;
    let p = path.to_str().unwrap().to_string();
    args.extend(["--output", &p]);
    let o = ksearch(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fs::read_to_string(path).unwrap()
}

#[test]
fn simulate_is_deterministic_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a.csv", with_data("simulate", &["--k", "10", "--rho", "0.2", "--workers", "1"]));
    let b = run_to(dir.path(), "b.csv", with_data("simulate", &["--k", "10", "--rho", "0.2", "--workers", "3"]));
    let body = |s: &str| s.lines().skip(1).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(body(&a), body(&b));
    assert!(a.starts_with("# ksearch ") && a.lines().next().unwrap().contains("seed=4"));
    // two kinds, each with the same number of windows
    let rows = body(&a).len() - 1;
    assert!(rows > 0 && rows % 2 == 0);
}

#[test]
fn experiment_has_one_row_per_cell_and_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(
        dir.path(),
        "sweep.csv",
        with_data("experiment", &["--kind", "max", "--k", "5,10", "--rho", "0,0.3"]),
    );
    assert_eq!(out.lines().count(), 2 + 2 * 2 * 3);
}

#[test]
fn learn_writes_history_and_final_weights() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), "learn.csv", with_data("learn", &["--kind", "min", "--k", "10"]));
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[1].starts_with("kind,round,chosen_lambda"));
    assert!(lines.last().unwrap().starts_with("# final_weights kind=min"));
    for l in &lines[2..lines.len() - 1] {
        let f: Vec<&str> = l.split(',').collect();
        let round: f64 = f[1].parse().unwrap();
        let (cum, avg): (f64, f64) = (f[5].parse().unwrap(), f[6].parse().unwrap());
        assert!((avg - cum / round).abs() <= 1e-12 * (1.0 + cum.abs()), "{l}");
    }
}
