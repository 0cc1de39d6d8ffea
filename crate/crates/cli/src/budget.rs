//! Up-front estimate of state-vector storage, checked against a byte budget.

use mqc_core::linalg::{KrylovOptions, LanczosOptions};
use mqc_core::ModelKind;

use crate::config::{Job, JobConfig};
use crate::error::{CliError, Result};

/// Environment variable holding the memory budget in bytes.
pub const MEMORY_BUDGET_VAR: &str = "MQC_ECHO_MEMORY_BUDGET";

/// 8 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 8 << 30;

pub fn memory_budget() -> Result<u64> {
    match std::env::var(MEMORY_BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MEMORY_BUDGET_VAR} must be a byte count, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MEMORY_BUDGET),
    }
}

fn lanczos_bytes(dim: u64) -> u64 {
    dim.saturating_mul(8).saturating_mul(LanczosOptions::default().max_basis as u64 + 4)
}

fn krylov_bytes(dim: u64) -> u64 {
    dim.saturating_mul(16).saturating_mul(KrylovOptions::default().dim as u64 + 8)
}

/// Bytes of vector storage the job needs at its peak; `workers` concurrent
/// realizations are counted for `disorder-sweep`.
pub fn required_bytes(job: Job, cfg: &JobConfig, workers: usize) -> u64 {
    let m = &cfg.model;
    let n = m.n_spins as u32;
    if m.kind == ModelKind::Lmg {
        let d = m.n_spins as u64 + 1;
        return d.saturating_mul(d).saturating_mul(8).saturating_mul(4);
    }
    let full = 1u64.checked_shl(n).unwrap_or(u64::MAX);
    let has_fields = m.kind == ModelKind::Rfti && m.sigma > 0.0;
    let sector = if has_fields { full } else { full / 2 };
    let diag = full.saturating_mul(8);
    let ground = lanczos_bytes(sector).saturating_add(diag);
    match job {
        Job::ScalingFit => 0,
        Job::GroundSpectrum if m.kind == ModelKind::Tfi && !cfg.analysis.order_parameter => 0,
        Job::FotocCurve | Job::DerivativeScan if m.kind == ModelKind::Tfi => 0,
        Job::GroundSpectrum | Job::FotocCurve | Job::DerivativeScan => {
            ground.saturating_add(full.saturating_mul(16))
        }
        Job::LaaRamp if m.kind == ModelKind::Tfi => 0,
        Job::LaaRamp => lanczos_bytes(full).saturating_mul(2).saturating_add(diag),
        Job::Echo | Job::PseudoEcho => ground.max(krylov_bytes(sector).saturating_add(diag)),
        Job::DisorderSweep => {
            let per = lanczos_bytes(full).saturating_add(diag);
            per.saturating_mul(workers.min(cfg.disorder.realizations).max(1) as u64)
        }
    }
}

pub fn check(job: Job, cfg: &JobConfig, workers: usize, budget: u64) -> Result<u64> {
    let required = required_bytes(job, cfg, workers);
    if required > budget {
        return Err(CliError::Budget { required, budget, var: MEMORY_BUDGET_VAR });
    }
    Ok(required)
}
