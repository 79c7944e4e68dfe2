//! Runs an experiment config the way the command-line tool does and writes
//! its artifacts. Usage: `run_config <config.json> <out-dir>`; defaults to
//! the bundled theory table.

use std::path::PathBuf;

use sgd_diffusion::experiment::{execute, write_artifacts, ExperimentConfig, ExperimentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/theory-table-st1.json")));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("sgd-diffusion-example"));
    let text = std::fs::read_to_string(&path)?;
    let kind: ExperimentKind = serde_json::from_value(serde_json::from_str::<serde_json::Value>(&text)?["experiment"].clone())?;
    let config = ExperimentConfig::parse(&text, kind)?;
    let artifacts = execute(&config)?;
    write_artifacts(&out, &artifacts)?;
    print!("{}", artifacts.results_csv);
    println!("artifacts in {}", out.display());
    Ok(())
}
