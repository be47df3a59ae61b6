use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nsga-maximin"));
    cmd.env_remove("NSGA_MAXIMIN_OUT");
    cmd
}

fn invoke(args: &[&str], cwd: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = invoke(args, cwd);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str], cwd: &Path) -> i32 {
    invoke(args, cwd).status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn data_rows(csv: &str) -> usize {
    csv.lines().filter(|l| !l.starts_with('#')).count() - 1
}

const LINE_RUN: [&str; 11] = [
    "run",
    "--problem",
    "linefront",
    "--scheme",
    "mu1",
    "--pop",
    "7",
    "--offspring",
    "10000",
    "--seed",
    "0",
];

#[test]
fn run_writes_population_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = LINE_RUN.to_vec();
    args.extend(["--out", "a"]);
    ok(&args, dir.path());
    let csv = fs::read_to_string(dir.path().join("a/population.csv")).unwrap();
    assert_eq!(data_rows(&csv), 7);
    assert!(csv.contains("\nid,x1,f1,f2,rank,crowding\n"));
    assert!(csv.contains("# seed=0\n"));
    let metrics = json(&dir.path().join("a/metrics.json"));
    for key in [
        "min_finite_cd",
        "gap_cv",
        "dup_at_extremes",
        "excluded_off_front",
        "cd_histogram",
        "manifest",
    ] {
        assert!(metrics.get(key).is_some(), "{key}");
    }
    assert_eq!(metrics["manifest"]["scheme"], "mu1");
    assert_eq!(metrics["evaluations"], 10007);
}

#[test]
fn identical_commands_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = LINE_RUN.to_vec();
    args.extend(["--out", "same"]);
    ok(&args, dir.path());
    let csv1 = fs::read(dir.path().join("same/population.csv")).unwrap();
    let json1 = fs::read(dir.path().join("same/metrics.json")).unwrap();
    ok(&args, dir.path());
    assert_eq!(
        csv1,
        fs::read(dir.path().join("same/population.csv")).unwrap()
    );
    assert_eq!(
        json1,
        fs::read(dir.path().join("same/metrics.json")).unwrap()
    );
}

#[test]
fn six_variable_dtlz1_configuration_runs() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "run",
            "--problem",
            "dtlz1",
            "--nvar",
            "6",
            "--nobj",
            "2",
            "--scheme",
            "mumu",
            "--pop",
            "5",
            "--gens",
            "10000",
            "--seed",
            "3",
            "--out",
            "p",
        ],
        dir.path(),
    );
    let csv = fs::read_to_string(dir.path().join("p/population.csv")).unwrap();
    assert_eq!(data_rows(&csv), 5);
    assert!(csv.contains("\nid,x1,x2,x3,x4,x5,x6,f1,f2,rank,crowding\n"));
    assert_eq!(
        json(&dir.path().join("p/metrics.json"))["evaluations"],
        50005
    );
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("exp.cfg"),
        "# line front\nproblem=linefront\npop=5\ngens=50\nseed=4\nscheme=mu1\n",
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config", "exp.cfg", "--pop", "6"])
        .env("NSGA_MAXIMIN_OUT", "from-env")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("from-env/population.csv")).unwrap();
    assert_eq!(data_rows(&csv), 6);
    assert!(csv.contains("# gens=50\n") && csv.contains("# seed=4\n"));

    fs::write(dir.path().join("bad.cfg"), "pop=5\nnot a pair\n").unwrap();
    let out = invoke(&["run", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.cfg:2"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cwd = dir.path();
    assert_eq!(code(&["run", "--scheme", "mu2"], cwd), 2);
    assert_eq!(code(&["run", "--pop", "2"], cwd), 2);
    assert_eq!(code(&["run", "--gens", "5", "--evals", "50"], cwd), 2);
    assert_eq!(code(&["run", "--problem", "zdt1"], cwd), 2);
    assert_eq!(code(&["maximin", "--n", "2"], cwd), 2);
    assert_eq!(code(&["maximin", "--n", "5", "--method", "magic"], cwd), 2);
    assert_eq!(code(&["frobnicate"], cwd), 2);
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("file"), "x").unwrap();
    let args = [
        "run",
        "--problem",
        "linefront",
        "--pop",
        "3",
        "--gens",
        "2",
        "--out",
        "file/sub",
    ];
    assert_eq!(code(&args, dir.path()), 3);
}

#[test]
fn maximin_examples() {
    let cwd = Path::new(".");
    let six = ok(&["maximin", "--n", "6"], cwd);
    assert!(
        six.contains("value=1\n") && six.contains("witness=0,0.5,0.5,1\n"),
        "{six}"
    );
    assert!(six.contains("uniqueness=unique"));
    let three = ok(&["maximin", "--n", "3"], cwd);
    assert!(
        three.contains("value=2\n") && three.contains("uniqueness=continuum"),
        "{three}"
    );
    let grid = ok(
        &[
            "maximin",
            "--n",
            "8",
            "--method",
            "grid",
            "--resolution",
            "0.01",
        ],
        cwd,
    );
    let value: f64 = grid
        .lines()
        .find_map(|l| l.strip_prefix("value="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 2.0 / 3.0).abs() <= 0.04);
    let bisect = ok(&["maximin", "--n", "20", "--method", "bisect"], cwd);
    assert!(bisect.contains("value=0.2222222222"), "{bisect}");
    assert_eq!(
        code(
            &[
                "maximin",
                "--n",
                "9",
                "--method",
                "grid",
                "--resolution",
                "0.01"
            ],
            cwd
        ),
        4
    );
}

fn write_line_csv(path: &Path, ts: &[f64]) {
    let mut text = String::from("id,f1,f2,rank,crowding\n");
    for (i, t) in ts.iter().enumerate() {
        text.push_str(&format!("{i},{t},{},,\n", 1.0 - t));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn analyze_examples() {
    let dir = tempfile::tempdir().unwrap();
    let third = 1.0 / 3.0;
    write_line_csv(
        &dir.path().join("eight.csv"),
        &[0.0, 0.0, third, third, 2.0 * third, 2.0 * third, 1.0, 1.0],
    );
    let report: Value = serde_json::from_str(&ok(&["analyze", "eight.csv"], dir.path())).unwrap();
    assert_eq!(report["is_optimal"], true);
    assert!((report["min_finite_cd"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);

    write_line_csv(&dir.path().join("six.csv"), &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
    let report: Value = serde_json::from_str(&ok(
        &["analyze", "six.csv", "--out", "six.json"],
        dir.path(),
    ))
    .unwrap();
    assert_eq!(report["is_optimal"], false);
    assert!((report["min_finite_cd"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert_eq!(json(&dir.path().join("six.json")), report);

    fs::write(
        dir.path().join("bad.csv"),
        "id,f1,f2,rank,crowding\n0,0,1,0,inf\n1,1,zero,0,inf\n",
    )
    .unwrap();
    let out = invoke(&["analyze", "bad.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:3"));
    assert_eq!(code(&["analyze", "missing.csv"], dir.path()), 3);
}

#[test]
fn analyze_reads_run_output() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "run",
            "--problem",
            "dtlz1",
            "--scheme",
            "mu1",
            "--pop",
            "6",
            "--gens",
            "3000",
            "--out",
            "d",
        ],
        dir.path(),
    );
    let text = fs::read_to_string(dir.path().join("d/population.csv")).unwrap();
    assert!(text.contains(",inf\n"));
    let report: Value =
        serde_json::from_str(&ok(&["analyze", "d/population.csv"], dir.path())).unwrap();
    assert_eq!(report["manifest"]["problem"], "dtlz1");
    let run_metrics = json(&dir.path().join("d/metrics.json"));
    for key in ["min_finite_cd", "gap_cv", "dup_at_extremes", "cd_histogram"] {
        assert_eq!(report[key], run_metrics[key], "{key}");
    }
}

#[test]
fn sweep_of_one_seed_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let common = [
        "--problem",
        "linefront",
        "--scheme",
        "mu1",
        "--pop",
        "5",
        "--gens",
        "500",
        "--seed",
        "2",
    ];
    let mut sweep = vec!["sweep", "--runs", "1", "--out", "sw"];
    sweep.extend(common);
    ok(&sweep, dir.path());
    let swept = fs::read(dir.path().join("sw/mu1/seed-2/population.csv")).unwrap();
    let aggregate = json(&dir.path().join("sw/aggregate.json"));
    assert_eq!(aggregate["summary"]["mu1"]["runs"], 1);

    fs::rename(dir.path().join("sw"), dir.path().join("kept")).unwrap();
    let mut run = vec!["run", "--out", "sw/mu1/seed-2"];
    run.extend(common);
    ok(&run, dir.path());
    assert_eq!(
        swept,
        fs::read(dir.path().join("sw/mu1/seed-2/population.csv")).unwrap()
    );
}

#[test]
fn paired_sweep_reports_the_comparison() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "sweep",
            "--problem",
            "linefront",
            "--scheme",
            "both",
            "--pop",
            "7",
            "--evals",
            "7007",
            "--runs",
            "3",
            "--out",
            "pair",
        ],
        dir.path(),
    );
    let aggregate = json(&dir.path().join("pair/aggregate.json"));
    assert_eq!(aggregate["paired"].as_array().unwrap().len(), 3);
    assert_eq!(aggregate["runs"].as_array().unwrap().len(), 6);
    assert!(aggregate["paired_mu1_lower"].as_u64().is_some());
    for scheme in ["mu1", "mumu"] {
        for seed in 0..3 {
            assert!(dir
                .path()
                .join(format!("pair/{scheme}/seed-{seed}/metrics.json"))
                .exists());
        }
    }
}
