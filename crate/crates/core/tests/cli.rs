use std::path::Path;
use std::process::{Command, Output};

use ues::bench::CSV_HEADER;

fn bench(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ues-bench"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn column(name: &str) -> usize {
    CSV_HEADER.split(',').position(|c| c == name).unwrap()
}

#[test]
fn help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bench(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(bench(&["--bogus-flag"], dir.path()).status.code(), Some(1));
    assert_eq!(bench(&["--synthetic", "no-such-problem"], dir.path()).status.code(), Some(1));
    assert_eq!(bench(&["--synthetic", "diagonal-quadratic", "--algo", "nope"], dir.path()).status.code(), Some(1));
    // Neither a dataset nor a synthetic problem.
    assert_eq!(bench(&[], dir.path()).status.code(), Some(1));
}

#[test]
fn io_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.libsvm");
    let out = bench(&["--dataset", missing.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let bad = dir.path().join("bad.libsvm");
    std::fs::write(&bad, "+1 1:1\n-1 2:oops\n").unwrap();
    let out = bench(&["--dataset", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn worked_example_trace() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--synthetic", "diagonal-quadratic", "--dim", "2", "--mu", "1", "--l", "4", "--algo", "suesa",
        "--x0", "1,1", "--max-iters", "1",
    ];
    let out = bench(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.path().join("suesa.csv"));
    assert_eq!(rows.len(), 2);
    let gap: f64 = rows[1][column("gap")].parse().unwrap();
    assert!((gap - 6.28125).abs() < 1e-12, "{gap}");
    let gap0: f64 = rows[0][column("gap")].parse().unwrap();
    assert!((gap0 - 8.5).abs() < 1e-12);
    assert_eq!(rows[0][column("ratio")], "");
    assert_eq!(rows[1][column("lambda_cum")].parse::<f64>().unwrap(), 0.75);
}

#[test]
fn start_at_minimizer_gives_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--synthetic", "diagonal-quadratic", "--dim", "3", "--algo", "suesa,asuesa", "--x0", "0,0,0"];
    assert_eq!(bench(&args, dir.path()).status.code(), Some(0));
    for name in ["suesa", "asuesa"] {
        let rows = csv_rows(&dir.path().join(format!("{name}.csv")));
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0][column("ratio")], "");
        assert_eq!(rows[0][column("gap")].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn certification_failure_exits_3_only_when_required() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--synthetic", "diagonal-quadratic", "--algo", "suesa", "--max-iters", "3"];
    assert_eq!(bench(&base, dir.path()).status.code(), Some(0));
    let mut strict = base.to_vec();
    strict.push("--require-certificate");
    assert_eq!(bench(&strict, dir.path()).status.code(), Some(3));
}

#[test]
fn two_dimensional_logistic_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--synthetic", "planar-logistic", "--algo", "suesa,asuesa,gd", "--require-certificate"];
    let out = bench(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("suesa") && summary.contains("gd"));

    let rows = csv_rows(&dir.path().join("gd.csv"));
    assert!(rows.iter().all(|r| r[column("ratio")].is_empty() && r[column("phi_star")].is_empty()));
    let gd_gap: f64 = rows.last().unwrap()[column("gap")].parse().unwrap();
    assert!(gd_gap <= 1e-8);
}

#[test]
fn dataset_runs_with_every_loss() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.libsvm");
    std::fs::write(&data, "+1 1:1 2:0.5\n-1 1:-0.5 3:1\n+1 2:1 3:-0.25\n-1 1:-1 2:-1\n").unwrap();
    let d = data.to_str().unwrap();
    let cases: [&[&str]; 4] = [
        &["--loss", "logistic", "--lambda1", "0.1"],
        &["--loss", "squared-hinge", "--lambda1", "0.1", "--adaptive"],
        &["--loss", "logistic", "--lambda1", "0.1", "--literal-paper-losses", "--dim-override", "5"],
        &["--loss", "elastic-net", "--lambda1", "0.1", "--lambda2", "0.01", "--algo", "cuesa,acuesa-adaptive"],
    ];
    for extra in cases {
        let mut args = vec!["--dataset", d, "--require-certificate"];
        args.extend_from_slice(extra);
        let out = bench(&args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{extra:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    // An l1 term is rejected for smooth-only algorithms.
    let args = ["--dataset", d, "--loss", "elastic-net", "--lambda2", "0.01", "--algo", "suesa"];
    assert_eq!(bench(&args, dir.path()).status.code(), Some(1));
}
