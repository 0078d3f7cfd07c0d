mod config;
mod output;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use sisampling::counterexample::{DEFAULT_SEED, MAX_ATTEMPTS, MAX_CONDITION, SEARCH_GRID};
use sisampling::frames::{COLUMN_TAIL, CONVERGENCE_SPREAD, EPS_FRAME};
use sisampling::spectral::{EPS_STAB, T_MIN};

use crate::config::ExperimentConfig;
use crate::output::Artifacts;

#[derive(Parser)]
#[command(name = "sisampling", version, about = "Sampling and stability analysis for shift-invariant spaces")]
struct Cli {
    /// Experiment config (TOML, or JSON with a .json extension)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for report.json and CSV traces
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    task: Task,
}

#[derive(Subcommand, Clone, Copy)]
enum Task {
    /// Symmetry order, poles, pole-collision conditions and stability
    Analyze,
    /// Fourier transform samples
    Spectrum,
    /// Integer-shift stability screen
    Stability,
    /// Finite-section sampling verdict for (lambda, gamma)
    Sampling,
    /// Semi-regular Gabor frame sweep
    Gabor,
    /// Critical-density vanishing function
    Vanisher,
    /// The two unstable examples
    VerifyExamples,
}

impl Task {
    fn name(self) -> &'static str {
        match self {
            Task::Analyze => "analyze",
            Task::Spectrum => "spectrum",
            Task::Stability => "stability",
            Task::Sampling => "sampling",
            Task::Gabor => "gabor",
            Task::Vanisher => "vanisher",
            Task::VerifyExamples => "verify-examples",
        }
    }
}

#[derive(Serialize)]
struct Tolerances {
    eps_stab: f64,
    t_min: f64,
    eps_frame: f64,
    convergence_spread: f64,
    column_tail: f64,
    max_condition: f64,
    max_attempts: usize,
    zero_search_grid: usize,
}

const TOLERANCES: Tolerances = Tolerances {
    eps_stab: EPS_STAB,
    t_min: T_MIN,
    eps_frame: EPS_FRAME,
    convergence_spread: CONVERGENCE_SPREAD,
    column_tail: COLUMN_TAIL,
    max_condition: MAX_CONDITION,
    max_attempts: MAX_ATTEMPTS,
    zero_search_grid: SEARCH_GRID,
};

#[derive(Serialize)]
struct Report<'a> {
    task: &'static str,
    version: &'static str,
    timestamp: String,
    seed: u64,
    config: &'a ExperimentConfig,
    tolerances: &'a Tolerances,
    artifacts: Vec<String>,
    result: Value,
}

fn run(cli: Cli) -> Result<()> {
    let task = cli.task.name();
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.validate(task)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().and_then(|o| o.dir.clone()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let ctx = tasks::TaskContext {
        cfg: &cfg,
        seed,
        csv: cfg.output.as_ref().is_none_or(|o| o.csv),
    };
    let mut artifacts = Artifacts::default();
    let result = match cli.task {
        Task::Analyze => tasks::analyze(&ctx, &mut artifacts),
        Task::Spectrum => tasks::spectrum(&ctx, &mut artifacts),
        Task::Stability => tasks::stability(&ctx, &mut artifacts),
        Task::Sampling => tasks::sampling(&ctx, &mut artifacts),
        Task::Gabor => tasks::gabor(&ctx, &mut artifacts),
        Task::Vanisher => tasks::vanisher(&ctx, &mut artifacts),
        Task::VerifyExamples => tasks::verify_examples(&ctx, &mut artifacts),
    }?;
    let mut names: Vec<String> = artifacts.names().iter().map(|s| s.to_string()).collect();
    names.insert(0, "report.json".into());
    let report = Report {
        task,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339(),
        seed,
        config: &cfg,
        tolerances: &TOLERANCES,
        artifacts: names,
        result,
    };
    artifacts.json("report.json", &report)?;
    for path in artifacts.write_all(&out_dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
