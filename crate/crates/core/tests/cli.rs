use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_sgd-diffusion");

const SWEEP: &str = r#"{
  "experiment": "escape-sweep",
  "seed": 99,
  "landscape": {"kind": "styblinski-tang", "dim": 1},
  "dynamics": {"kind": "sgld", "eta": 0.01, "diffusion": 10.0},
  "valley": {"start": "minimum", "radius": 5.65, "max_iters": 1000000},
  "sweep": {"variable": "diffusion_d", "grid": [10.0, 13.0, 16.0, 20.0], "trials_per_point": 40}
}
"#;

const NEGATIVE_ETA: &str = r#"{
  "experiment": "escape-sweep",
  "seed": 1,
  "landscape": {"kind": "styblinski-tang", "dim": 1},
  "dynamics": {"kind": "sgld", "eta": -0.01, "diffusion": 10.0},
  "valley": {"start": "minimum", "radius": 5.65},
  "sweep": {"variable": "diffusion_d", "grid": [10.0, 20.0]}
}
"#;

const THEORY: &str = r#"{
  "seed": 1,
  "landscape": {"kind": "styblinski-tang", "dim": 1},
  "theory": {"diffusions": [20.0], "eta": 0.01}
}
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SGD_DIFFUSION_OUT").output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn escape_sweep_replays_byte_identically_for_any_worker_count() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "sweep.json", SWEEP);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(run(&["escape-sweep", "--config", s(&cfg), "--out", s(&a), "--workers", "1"]).status.success());
    assert!(run(&["escape-sweep", "--config", s(&cfg), "--out", s(&b), "--workers", "4"]).status.success());
    for file in ["results.csv", "summary.json", "plot.svg"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file} differs");
    }
    let csv = fs::read_to_string(a.join("results.csv")).unwrap();
    assert!(csv.starts_with("x_raw,x_transformed,gamma_hat,ci_low,ci_high,neg_log_gamma,"));
    assert_eq!(csv.lines().count(), 5);
    assert!(a.join("timing.json").exists());
}

#[test]
fn summary_echoes_every_resolved_default() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "sweep.json", SWEEP);
    let out = tmp.path().join("o");
    assert!(run(&["escape-sweep", "--config", s(&cfg), "--out", s(&out), "--seed", "7"]).status.success());
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["config"]["seed"], 7);
    assert_eq!(summary["config"]["dynamics"]["sampling"], "with-replacement");
    assert_eq!(summary["config"]["pretrain"]["lr"], 0.1);
    assert_eq!(summary["status"]["status"], "complete");
    assert!(summary["results"]["fit"]["pearson"].as_f64().unwrap() > 0.9);
}

#[test]
fn negative_eta_exits_with_status_2_naming_the_field() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.json", NEGATIVE_ETA);
    let out = run(&["escape-sweep", "--config", s(&cfg), "--out", s(&tmp.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("dynamics.eta"), "{err}");
    assert!(err.contains("line 5"), "{err}");
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn unknown_keys_and_wrong_subcommand_are_config_errors() {
    let tmp = TempDir::new().unwrap();
    let typo = write_config(tmp.path(), "typo.json", &SWEEP.replace("\"seed\"", "\"sead\""));
    let out = run(&["escape-sweep", "--config", s(&typo), "--dry-run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sead"));
    let cfg = write_config(tmp.path(), "sweep.json", SWEEP);
    assert_eq!(run(&["occupancy", "--config", s(&cfg), "--dry-run"]).status.code(), Some(2));
    assert_eq!(run(&["occupancy", "--config", s(&tmp.path().join("missing.json"))]).status.code(), Some(2));
}

#[test]
fn theory_table_reports_the_reference_escape_time() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "theory.json", THEORY);
    let out = tmp.path().join("o");
    assert!(run(&["theory-table", "--config", s(&cfg), "--out", s(&out)]).status.success());
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "20");
    assert!(row[4].starts_with("1.92"), "{csv}");
    let svg = fs::read_to_string(out.join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn dry_run_prints_resolved_config_and_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "theory.json", THEORY);
    let out = tmp.path().join("o");
    let res = run(&["theory-table", "--config", s(&cfg), "--out", s(&out), "--dry-run"]);
    assert!(res.status.success());
    let printed: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(printed["experiment"], "theory-table");
    assert_eq!(printed["theory"]["trials"], 0);
    assert!(!out.exists());
}

#[test]
fn output_directory_falls_back_to_environment() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "theory.json", THEORY);
    let out = tmp.path().join("from-env");
    let res = Command::new(BIN)
        .args(["theory-table", "--config", s(&cfg)])
        .env("SGD_DIFFUSION_OUT", &out)
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(out.join("summary.json").exists());
}

#[test]
fn occupancy_without_transitions_exits_4_but_writes_artifacts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "occ.json",
        r#"{
  "experiment": "occupancy",
  "seed": 1,
  "landscape": {"kind": "double-well", "height": 1.0, "tilt": 0.1},
  "dynamics": {"kind": "sgld", "eta": 0.01, "diffusion": 0.01},
  "occupancy": {"regions": [{"center": [-1.0], "radius": 0.6}, {"center": [1.0], "radius": 0.6}], "total_iters": 10000}
}
"#,
    );
    let out = tmp.path().join("o");
    let res = run(&["occupancy", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(4));
    let summary = fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("insufficient-data"));
}

#[test]
fn bundled_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let kind = serde_json::from_str::<serde_json::Value>(&text).unwrap()["experiment"].as_str().unwrap().to_string();
        let res = run(&[&kind, "--config", s(&path), "--dry-run"]);
        assert!(res.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&res.stderr));
        seen += 1;
    }
    assert!(seen >= 5);
}
