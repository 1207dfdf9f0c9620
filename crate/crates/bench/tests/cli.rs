use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qikm_bench::report::{render_csv, render_markdown};
use qikm_bench::{emit_report, read_runs_csv, run_experiment, ExperimentConfig, MethodName, MethodSpec};
use qikm_core::{DatasetId, DatasetSpec};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn iris(methods: Vec<MethodSpec>, seeds: Vec<u64>, restarts: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(DatasetSpec::new(DatasetId::Iris, data_dir()), methods, seeds);
    cfg.restarts_per_seed = restarts;
    cfg
}

fn all_methods() -> Vec<MethodSpec> {
    [MethodName::Classical, MethodName::Angle, MethodName::Amplitude, MethodName::Hybrid]
        .into_iter()
        .map(MethodSpec::new)
        .collect()
}

fn qikm(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qikm"));
    cmd.args(args);
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    cmd.output().unwrap()
}

#[test]
fn single_run_gives_single_row() {
    let report = run_experiment(&iris(vec![MethodSpec::new(MethodName::Angle)], vec![7], 1)).unwrap();
    assert_eq!(report.rows.len(), 1);
    let row = &report.rows[0];
    assert!((-1.0..=1.0).contains(&row.ari));
    assert!(row.silhouette.is_none_or(|s| (-1.0..=1.0).contains(&s)));
    assert_eq!((row.seed, row.restart, row.k), (7, 0, 3));
    assert_eq!(row.checksum.len(), 64);
}

#[test]
fn reports_are_deterministic_and_ordered() {
    let cfg = iris(all_methods(), vec![5, 1], 3);
    let a = run_experiment(&cfg).unwrap();
    let mut serial = cfg.clone();
    serial.jobs = 1;
    let b = run_experiment(&serial).unwrap();
    assert_eq!(render_csv(&a).unwrap(), render_csv(&b).unwrap());
    assert_eq!(render_markdown(&a), render_markdown(&b));
    let keys: Vec<(String, u64)> = a.rows.iter().map(|r| (r.method.clone(), r.seed)).collect();
    let expected: Vec<(String, u64)> = ["classical", "angle", "amplitude", "hybrid"]
        .iter()
        .flat_map(|m| [(m.to_string(), 5), (m.to_string(), 1)])
        .collect();
    assert_eq!(keys, expected);
    for r in &a.rows {
        assert!(r.runtime_ms >= 0.0);
        assert!((-1.0..=1.0).contains(&r.ari));
    }
    let hybrid = a.rows.iter().find(|r| r.method == "hybrid").unwrap();
    assert!(hybrid.pair_first.is_some() && hybrid.pair_second.is_some());
}

#[test]
fn four_method_markdown_and_csv_round_trip() {
    let report = run_experiment(&iris(all_methods(), vec![2], 2)).unwrap();
    let md = render_markdown(&report);
    assert!(md.contains("| Metric | classical | angle | amplitude | hybrid |"));
    assert!(md.contains("| Silhouette Score |"));
    assert!(md.contains("| Adjusted Rand Index |"));

    let dir = tempfile::tempdir().unwrap();
    emit_report(&report, dir.path()).unwrap();
    let back = read_runs_csv(&dir.path().join("runs.csv")).unwrap();
    assert_eq!(back.len(), report.rows.len());
    for (x, y) in back.iter().zip(&report.rows) {
        assert!((x.ari - y.ari).abs() <= 1e-9);
        assert!((x.sse - y.sse).abs() <= 1e-9);
        match (x.silhouette, y.silhouette) {
            (Some(p), Some(q)) => assert!((p - q).abs() <= 1e-9),
            (p, q) => assert_eq!(p, q),
        }
        assert_eq!((&x.method, x.seed, x.n_iterations, x.converged), (&y.method, y.seed, y.n_iterations, y.converged));
    }
    assert_eq!(std::fs::read_to_string(dir.path().join("runs.jsonl")).unwrap().lines().count(), report.rows.len());
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("exp.toml");
    std::fs::write(&path, format!("data_dir = {:?}\noutput_dir = \"out\"\n{body}", data_dir().display().to_string()))
        .unwrap();
    path
}

#[test]
fn cli_run_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "dataset = \"wine\"\nseeds = [1, 2]\n[[methods]]\nname = \"classical\"\n[[methods]]\nname = \"angle\"\n",
    );
    let out = dir.path().join("custom");
    let o = qikm(
        &[
            "run",
            "--dataset",
            "iris",
            "--method",
            "angle",
            "--seed",
            "4",
            "--restarts",
            "2",
            "--jobs",
            "2",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ],
        Some(&config),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_runs_csv(&out.join("runs.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(
        (rows[0].dataset.as_str(), rows[0].method.as_str(), rows[0].seed, rows[0].restarts),
        ("iris", "angle", 4, 2)
    );
    assert_eq!(String::from_utf8(o.stdout).unwrap(), std::fs::read_to_string(out.join("runs.csv")).unwrap());
    assert!(out.join("report.md").exists());
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qikm(&["run"], Some(&dir.path().join("absent.toml"))).status.code(), Some(1));

    let bad =
        write_config(dir.path(), "dataset = \"iris\"\nseeds = [1]\nrestarts = 0\n[[methods]]\nname = \"angle\"\n");
    assert_eq!(qikm(&["run"], Some(&bad)).status.code(), Some(1));

    let good =
        write_config(dir.path(), "dataset = \"iris\"\nseeds = [1]\nrestarts = 1\n[[methods]]\nname = \"angle\"\n");
    let missing = qikm(&["run", "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(qikm(&["--version"], None).status.code(), Some(0));
    let nodata = std::fs::read_to_string(&good).unwrap().replace(&data_dir().display().to_string(), "/nonexistent");
    std::fs::write(&good, nodata).unwrap();
    let o = qikm(&["run"], Some(&good));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/iris.data"));

    let good =
        write_config(dir.path(), "dataset = \"iris\"\nseeds = [1]\nrestarts = 1\n[[methods]]\nname = \"angle\"\n");
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = qikm(&["run", "--out", blocker.join("sub").to_str().unwrap()], Some(&good));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cli_list_and_verify() {
    let o = qikm(&["list-datasets"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for id in DatasetId::ALL {
        assert!(text.contains(id.as_str()));
    }
    let dir = tempfile::tempdir().unwrap();
    let o = qikm(&["verify", "--data-dir", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().filter(|l| l.starts_with("FAIL")).count(), 8);
}
