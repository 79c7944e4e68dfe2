use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sgd_diffusion::experiment::{
    execute, write_artifacts, write_timing, ConfigError, ExperimentConfig, ExperimentError, ExperimentKind, RunStatus, OUT_DIR_ENV,
};

#[derive(Parser)]
#[command(version, about = "Escape-time experiments for SGD and SGLD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Histogram of gradient-noise norms against Gaussian and stable baselines.
    NoiseHist(RunArgs),
    /// Noise covariance against H/B in the Hessian eigenbasis.
    CovFit(RunArgs),
    /// Escape-rate sweep over k, B, η or D with a linear fit.
    EscapeSweep(RunArgs),
    /// Closed-form escape times, optionally checked by simulation.
    TheoryTable(RunArgs),
    /// Long-run residence fractions in two valleys.
    Occupancy(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; falls back to $SGD_DIFFUSION_OUT, then the config, then ./out.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for trial-level parallelism; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Validate and print the resolved config without running.
    #[arg(long)]
    dry_run: bool,
}

fn run(kind: ExperimentKind, args: RunArgs) -> Result<RunStatus, ExperimentError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| ConfigError {
        line: None,
        field: None,
        message: format!("cannot read config: {e}"),
    })?;
    let mut config = ExperimentConfig::parse(&text, kind)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.dry_run {
        println!("{}", serde_json::to_string_pretty(&config).expect("config serializes"));
        return Ok(RunStatus::Complete);
    }
    let out = args
        .out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| std::io::Error::other(e.to_string()))?;
    let started = Instant::now();
    let artifacts = pool.install(|| execute(&config))?;
    write_artifacts(&out, &artifacts)?;
    write_timing(&out, started.elapsed())?;
    log::info!("wrote artifacts to {}", out.display());
    Ok(artifacts.status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::NoiseHist(a) => (ExperimentKind::NoiseHist, a),
        Command::CovFit(a) => (ExperimentKind::CovFit, a),
        Command::EscapeSweep(a) => (ExperimentKind::EscapeSweep, a),
        Command::TheoryTable(a) => (ExperimentKind::TheoryTable, a),
        Command::Occupancy(a) => (ExperimentKind::Occupancy, a),
    };
    let config_path = args.config.clone();
    match run(kind, args) {
        Ok(RunStatus::Complete) => ExitCode::SUCCESS,
        Ok(RunStatus::InsufficientData(reason)) => {
            eprintln!("insufficient data: {reason}");
            ExitCode::from(4)
        }
        Err(e) => {
            match &e {
                ExperimentError::Config(_) => eprintln!("{}: {e}", config_path.display()),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
