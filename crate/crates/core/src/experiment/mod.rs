//! Config-driven experiments and their artifacts.
//!
//! [`execute`] computes everything in memory; [`write_artifacts`] puts
//! `results.csv`, `summary.json` and `plot.svg` on disk. Wall-clock time is
//! kept out of those files (see [`write_timing`]) so that a replay with the
//! same config and seed reproduces them byte for byte.

mod config;
mod runners;

use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

pub use config::{
    locate, ConfigError, CovarianceConfig, ExperimentConfig, ExperimentKind, LandscapeConfig, NamedPoint,
    NoiseConfig, OccupancyConfig, PointConfig, PretrainConfig, RegionConfig, TheoryConfig, ValleyConfig,
};
pub use runners::{build_landscape, resolve_point, ResolvedPoint};

use crate::error::Error;

/// Environment variable that may supply the output directory.
pub const OUT_DIR_ENV: &str = "SGD_DIFFUSION_OUT";

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Run(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    /// 2 for configuration problems, 3 for numerical failures, 4 for too
    /// little data, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) | ExperimentError::Run(Error::InvalidArgument(_)) => 2,
            ExperimentError::Run(Error::NumericalFailure(_) | Error::Diverged { .. }) => 3,
            ExperimentError::Run(Error::InsufficientData(_)) => 4,
            ExperimentError::Io(_) => 1,
        }
    }
}

/// Whether the run produced everything it was asked for. Artifacts are
/// written either way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    InsufficientData(String),
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub results_csv: String,
    pub summary_json: String,
    pub plot_svg: String,
    pub status: RunStatus,
}

#[derive(Serialize)]
struct Summary<'a, R: Serialize> {
    experiment: &'a str,
    seed: u64,
    status: &'a RunStatus,
    config: &'a ExperimentConfig,
    results: R,
}

fn summary_json<R: Serialize>(config: &ExperimentConfig, status: &RunStatus, results: R) -> String {
    let summary = Summary { experiment: config.kind().name(), seed: config.seed, status, config, results };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

/// Runs a validated configuration.
pub fn execute(config: &ExperimentConfig) -> Result<Artifacts, ExperimentError> {
    config.validate()?;
    match config.kind() {
        ExperimentKind::NoiseHist => runners::noise_hist(config),
        ExperimentKind::CovFit => runners::cov_fit(config),
        ExperimentKind::EscapeSweep => runners::escape_sweep(config),
        ExperimentKind::TheoryTable => runners::theory_table(config),
        ExperimentKind::Occupancy => runners::occupancy(config),
    }
}

pub fn write_artifacts(dir: &Path, artifacts: &Artifacts) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("results.csv"), &artifacts.results_csv)?;
    fs::write(dir.join("summary.json"), &artifacts.summary_json)?;
    fs::write(dir.join("plot.svg"), &artifacts.plot_svg)
}

/// Wall-clock time goes to its own file so the other artifacts replay
/// identically.
pub fn write_timing(dir: &Path, elapsed: Duration) -> std::io::Result<()> {
    fs::write(dir.join("timing.json"), format!("{{\"wall_seconds\": {:.3}}}\n", elapsed.as_secs_f64()))
}
