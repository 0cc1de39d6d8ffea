//! Configuration-driven runner for the MQC ground-state and echo experiments.

pub mod budget;
pub mod catalog;
pub mod config;
pub mod error;
pub mod jobs;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{Job, JobConfig};
pub use error::{CliError, Result};

/// One invocation after argument parsing.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub job: Job,
    pub config: Option<String>,
    pub sets: Vec<String>,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

/// Merges defaults, document, overrides and flags into a validated config.
pub fn resolve(req: &RunRequest) -> Result<JobConfig> {
    let mut doc = match &req.config {
        Some(src) => config::load_document(src)?,
        None => toml::Table::new(),
    };
    for s in &req.sets {
        config::apply_override(&mut doc, s)?;
    }
    let mut cfg = config::from_document(doc)?;
    match cfg.job {
        Some(j) if j != req.job => {
            return Err(CliError::config("job", format!("config is for `{j}` but `{}` was requested", req.job)))
        }
        _ => cfg.job = Some(req.job),
    }
    if let Some(s) = req.seed {
        cfg.seed = s;
    }
    if let Some(w) = req.workers {
        cfg.workers = Some(w);
    }
    if cfg.workers.is_none() {
        cfg.workers = Some(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    }
    cfg.validate(req.job)?;
    Ok(cfg)
}

/// Resolves, checks the memory budget, runs and writes the outputs.
pub fn execute(req: &RunRequest) -> Result<Vec<PathBuf>> {
    let cfg = resolve(req)?;
    let workers = cfg.workers.unwrap_or(1);
    let required = budget::check(req.job, &cfg, workers, budget::memory_budget()?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    let result = pool.install(|| jobs::run(req.job, &cfg))?;
    write(&req.out, req.job, &cfg, workers, required, result)
}

fn write(
    dir: &Path,
    job: Job,
    cfg: &JobConfig,
    workers: usize,
    required: u64,
    result: jobs::JobOutput,
) -> Result<Vec<PathBuf>> {
    let mut outputs = Vec::new();
    for f in &cfg.output.formats {
        outputs.push(match f {
            config::Format::Csv => output::RESULTS_FILE,
            config::Format::Json => output::SUMMARY_FILE,
        });
    }
    let manifest = output::Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        job,
        seed: cfg.seed,
        workers,
        seeds: &result.seeds,
        required_memory_bytes: required,
        outputs,
        config: cfg,
    };
    output::write_run(dir, &result.table, &result.summary, &manifest)
}
