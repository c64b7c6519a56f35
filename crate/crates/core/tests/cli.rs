use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn agora() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_agora"));
    c.env_remove("AGORA_WORKERS");
    c
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SINGLE_SET: &str = r#"{
    "manifold": {"shape": "circle", "radius": 1.0},
    "data": {"d_size": 30, "e_size": 40},
    "tau": {"rho": 0.2},
    "timaeus": {"kind": "logistic"},
    "theta": {"sets": [{"eta": 0.1, "batch_size": 8, "seed": 1, "epochs": 3}]},
    "master_seed": 5
}"#;

const GRID: &str = r#"{
    "manifold": {"shape": "circle", "radius": 1.0},
    "data": {"d_size": 50, "e_size": 80, "d_representative": false},
    "tau": {"rho": 0.2},
    "socrates": {"noise_rate": 0.1},
    "timaeus": {"kind": "mlp", "hidden": 4},
    "theta": {"grid": {"eta": [0.05, 0.3], "batch_size": [4, 16], "seed": [1, 2], "epochs": [2]}},
    "master_seed": 9
}"#;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run_config(config: &Path, out: &Path, extra: &[&str]) -> Output {
    run(agora()
        .arg("run")
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra))
}

#[test]
fn single_set_run_reports_unit_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "one.json", SINGLE_SET);
    let out = dir.path().join("one.csv");
    let o = run_config(&cfg, &out, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("one.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["ratio"], Value::from(1.0));
    assert_eq!(summary["theta_count"], Value::from(1));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("iter,theta_id,accuracy,is_incumbent,"));
}

#[test]
fn traces_are_byte_identical_across_repeats_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "grid.json", GRID);
    let mut traces = Vec::new();
    for (i, w) in ["1", "1", "4", "8"].iter().enumerate() {
        let out = dir.path().join(format!("t{i}.csv"));
        let o = run_config(&cfg, &out, &["--workers", w]);
        assert!(o.status.success(), "{}", stderr(&o));
        traces.push(std::fs::read(&out).unwrap());
    }
    assert!(traces.iter().all(|t| t == &traces[0]));

    // the environment default gives the same bytes too
    let out = dir.path().join("env.csv");
    let o = run(agora().env("AGORA_WORKERS", "3").arg("run").arg("--config").arg(&cfg).arg("--out").arg(&out));
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), traces[0]);
}

#[test]
fn seed_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "grid.json", GRID);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(run_config(&cfg, &a, &["--seed", "1"]).status.success());
    assert!(run_config(&cfg, &b, &["--seed", "2"]).status.success());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn invalid_config_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let bad_noise = SINGLE_SET.replace(r#""timaeus""#, r#""socrates": {"noise_rate": 0.5}, "timaeus""#);
    let cfg = write_config(dir.path(), "noise.json", &bad_noise);
    let o = run_config(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("socrates.noise_rate"), "{}", stderr(&o));

    let unknown = SINGLE_SET.replace(r#""master_seed""#, r#""master_sed": 1, "master_seed""#);
    let cfg = write_config(dir.path(), "unknown.json", &unknown);
    assert_eq!(run_config(&cfg, &out, &[]).status.code(), Some(2));

    let zero_rho = SINGLE_SET.replace(r#""rho": 0.2"#, r#""rho": 0.0"#);
    let cfg = write_config(dir.path(), "rho.json", &zero_rho);
    let o = run_config(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tau"), "{}", stderr(&o));

    let o = run_config(&dir.path().join("missing.json"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "one.json", SINGLE_SET);
    let o = run_config(&cfg, &dir.path().join("no/such/dir/t.csv"), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bounds_prints_the_report_with_fixed_keys() {
    let o = run(agora().args(["bounds", "--manifold", "circle", "--radius", "1", "--rho", "0.2", "--delta", "0.1"]));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["rho", "delta", "beta", "lambda_rho", "n_min", "epsilon_min", "d_min", "kappa_min"]);
    assert_eq!(v["n_min"], Value::from(449));
    assert_eq!(v["kappa_min"], Value::from(17));
    assert!((v["beta"].as_f64().unwrap() - 15.787097).abs() < 1e-6);
}

#[test]
fn bounds_with_runtime_prints_a_second_line() {
    let o = run(agora().args([
        "bounds", "--manifold", "circle", "--radius", "1", "--rho", "0.2", "--delta", "0.1", "--runtime", "sgd",
        "--theta-count", "4", "--theta-size", "4", "--e-size", "100", "--batch-max", "32", "--zeta", "0.0001",
    ]));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let p: Value = serde_json::from_str(lines[1]).unwrap();
    let keys: Vec<&str> = p.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["total_steps_bound", "train_term", "select_term", "socrates_term", "inputs"]);
    assert_eq!(p["inputs"]["model"], Value::from("sgd"));
}

#[test]
fn bounds_range_violation_exits_2() {
    let o = run(agora().args(["bounds", "--manifold", "circle", "--radius", "1", "--rho", "0.6", "--delta", "0.1"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("0 < ρ < μ/2"), "{}", stderr(&o));
    let o = run(agora().args(["bounds", "--manifold", "circle", "--radius", "1", "--rho", "0.2", "--delta", "0.9"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("δ"), "{}", stderr(&o));
}

#[test]
fn datagen_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = run(agora()
            .args(["datagen", "--manifold", "circle", "--radius", "1", "--n", "100", "--seed", "4", "--out"])
            .arg(p));
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 101);
    assert!(text.starts_with("x0,x1,y\n"));
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let d = agora::Dataset::load("D", &a).unwrap();
    assert_eq!(d.len(), 100);
}

#[test]
fn datagen_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = run(agora().args(["datagen", "--manifold", "circle", "--radius", "1", "--n", "0", "--out"]).arg(&out));
    assert_eq!(o.status.code(), Some(2));
    let o = run(agora().args(["datagen", "--manifold", "sphere", "--n", "5", "--out"]).arg(&out));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--radius"));
}

#[test]
fn verify_runs_a_suite() {
    let o = run(agora().args(["verify", "--suite", "lemma4", "--trials", "10"]));
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("PASS lemma4"));
}

#[test]
fn verify_unknown_suite_lists_valid_names() {
    let o = run(agora().args(["verify", "--suite", "nope"]));
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for s in agora::harness::SUITES {
        assert!(err.contains(s), "{err}");
    }
}
