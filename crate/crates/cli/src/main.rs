use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mqc_echo::{catalog, execute, Job, RunRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    ListJobs,
    GroundSpectrum,
    FotocCurve,
    Echo,
    PseudoEcho,
    LaaRamp,
    DerivativeScan,
    ScalingFit,
    DisorderSweep,
}

/// Multiple-quantum-coherence spectra of spin-model ground states and echoes.
///
/// Settings are merged in this order, later winning: built-in defaults,
/// the --config document, each --set in order, then --seed and --workers.
/// The state-memory budget in bytes is read from MQC_ECHO_MEMORY_BUDGET.
#[derive(Debug, Parser)]
#[command(name = "mqc-echo", version)]
struct Args {
    /// Job to run, or `list-jobs` for the recipe catalog.
    #[arg(value_enum)]
    command: Command,
    /// TOML config file, a previous run's manifest.json, or `recipe:<name>`.
    #[arg(long)]
    config: Option<String>,
    /// Override one config field, e.g. `--set model.n_spins=20`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    workers: Option<usize>,
}

fn job_of(c: Command) -> Option<Job> {
    Some(match c {
        Command::ListJobs => return None,
        Command::GroundSpectrum => Job::GroundSpectrum,
        Command::FotocCurve => Job::FotocCurve,
        Command::Echo => Job::Echo,
        Command::PseudoEcho => Job::PseudoEcho,
        Command::LaaRamp => Job::LaaRamp,
        Command::DerivativeScan => Job::DerivativeScan,
        Command::ScalingFit => Job::ScalingFit,
        Command::DisorderSweep => Job::DisorderSweep,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(job) = job_of(args.command) else {
        print!("{}", catalog::listing());
        return ExitCode::SUCCESS;
    };
    let Some(out) = args.out else {
        eprintln!("error: usage: --out <dir> is required for `{job}`");
        return ExitCode::from(2);
    };
    let req = RunRequest { job, config: args.config, sets: args.sets, out, seed: args.seed, workers: args.workers };
    match execute(&req) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
