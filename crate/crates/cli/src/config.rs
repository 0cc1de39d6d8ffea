//! Declarative job configuration.
//!
//! Precedence, lowest first: built-in defaults, the config document,
//! `--set key=value` overrides in command-line order, then the dedicated
//! `--seed` and `--workers` flags.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use mqc_core::analysis::PeakSide;
use mqc_core::ModelKind;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Job {
    GroundSpectrum,
    FotocCurve,
    Echo,
    PseudoEcho,
    LaaRamp,
    DerivativeScan,
    ScalingFit,
    DisorderSweep,
}

impl Job {
    pub fn name(self) -> &'static str {
        match self {
            Job::GroundSpectrum => "ground-spectrum",
            Job::FotocCurve => "fotoc-curve",
            Job::Echo => "echo",
            Job::PseudoEcho => "pseudo-echo",
            Job::LaaRamp => "laa-ramp",
            Job::DerivativeScan => "derivative-scan",
            Job::ScalingFit => "scaling-fit",
            Job::DisorderSweep => "disorder-sweep",
        }
    }
}

impl fmt::Display for Job {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Laa,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// All fields are in units of `chi` where dimensionful: fields as
/// `Omega/chi`, durations as `chi*tau`, couplings as `gamma/chi`, `Delta/chi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub n_spins: usize,
    pub chi: f64,
    pub gamma: f64,
    /// Disorder strength of the single realization used outside `disorder-sweep`.
    pub sigma: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { kind: ModelKind::Lmg, n_spins: 50, chi: 1.0, gamma: 0.0, sigma: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolSection {
    pub chi_tau: Vec<f64>,
    pub omega0: f64,
    pub omega_tau: f64,
    /// Time steps per ramp; `max(1000, ceil(40 chi tau))` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Rotation-angle samples; `2N + 2` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_samples: Option<usize>,
    pub schedule: ScheduleKind,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self {
            chi_tau: vec![10.0, 100.0],
            omega0: 10.0,
            omega_tau: 0.01,
            steps: None,
            phi_samples: None,
            schedule: ScheduleKind::Laa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self { omega_min: 0.5, omega_max: 1.5, points: 51 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    /// Largest coherence order reported; `N` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    pub orders: Vec<i64>,
    pub fd_step: f64,
    pub peak_side: PeakSide,
    pub lanczos_tol: f64,
    /// Also compute `2<|S_z|>/N`; needs an exact-diagonalization pass for TFI.
    pub order_parameter: bool,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            m_max: None,
            orders: vec![0, 2],
            fd_step: mqc_core::tolerance::FD_STEP,
            peak_side: PeakSide::Positive,
            lanczos_tol: mqc_core::tolerance::LANCZOS_SCAN_RESIDUAL,
            order_parameter: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisorderSection {
    pub sigmas: Vec<f64>,
    pub realizations: usize,
}

impl Default for DisorderSection {
    fn default() -> Self {
        Self { sigmas: vec![0.1, 1.0], realizations: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSection {
    pub sizes: Vec<usize>,
}

impl Default for ScalingSection {
    fn default() -> Self {
        Self { sizes: vec![200, 400, 800, 1600] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { formats: vec![Format::Csv, Format::Json] }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub job: Option<Job>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub model: ModelSection,
    pub protocol: ProtocolSection,
    pub scan: ScanSection,
    pub analysis: AnalysisSection,
    pub disorder: DisorderSection,
    pub scaling: ScalingSection,
    pub output: OutputSection,
}

/// Reads a config document as a TOML tree.
///
/// `recipe:<name>` loads a catalog recipe; a `.json` file is read as a run
/// manifest and its `config` object is used.
pub fn load_document(source: &str) -> Result<toml::Table> {
    if let Some(name) = source.strip_prefix("recipe:") {
        let recipe = catalog::find(name)
            .ok_or_else(|| CliError::Usage(format!("unknown recipe `{name}`; see `mqc-echo list-jobs`")))?;
        return parse_toml(recipe.config, source);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), source: e })?;
    if path.extension().is_some_and(|e| e == "json") {
        let manifest: serde_json::Value = serde_json::from_str(&text)?;
        let config = manifest
            .get("config")
            .ok_or_else(|| CliError::config("config", "manifest has no `config` object"))?;
        return match toml::Value::try_from(config) {
            Ok(toml::Value::Table(t)) => Ok(t),
            Ok(_) => Err(CliError::config("config", "expected an object")),
            Err(e) => Err(CliError::config("config", e.to_string())),
        };
    }
    parse_toml(&text, source)
}

fn parse_toml(text: &str, source: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>().map_err(|e| CliError::config(source, e.to_string()))
}

/// Applies one `key=value` override. Dotted keys address nested tables; the
/// value is parsed as a TOML literal and falls back to a bare string.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{assignment}`")))?;
    let key = key.trim();
    let raw = raw.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if key.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage(format!("--set has an empty key segment in `{key}`")));
    }
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let mut table = doc;
    for (depth, part) in parts[..parts.len() - 1].iter().enumerate() {
        let entry = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::config(parts[..=depth].join("."), "is not a table"))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Deserializes a document, reporting the dotted path of the first bad field.
pub fn from_document(doc: toml::Table) -> Result<JobConfig> {
    serde_path_to_error::deserialize(toml::Value::Table(doc)).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(if path == "." { String::from("<root>") } else { path }, e.into_inner().to_string())
    })
}

impl JobConfig {
    /// Checks ranges the type system cannot express.
    pub fn validate(&self, job: Job) -> Result<()> {
        let bad = |path: &str, msg: String| Err(CliError::config(path, msg));
        let m = &self.model;
        if m.n_spins < 2 {
            return bad("model.n_spins", format!("need at least 2 spins, got {}", m.n_spins));
        }
        if !(m.chi > 0.0) || !m.chi.is_finite() {
            return bad("model.chi", format!("must be positive and finite, got {}", m.chi));
        }
        if !m.gamma.is_finite() {
            return bad("model.gamma", "must be finite".into());
        }
        if !(m.sigma >= 0.0) || !m.sigma.is_finite() {
            return bad("model.sigma", format!("must be finite and >= 0, got {}", m.sigma));
        }
        let s = &self.scan;
        if s.points == 0 {
            return bad("scan.points", "must be at least 1".into());
        }
        if !(s.omega_min >= 0.0) || !s.omega_max.is_finite() {
            return bad("scan.omega_min", "scan range must be finite and non-negative".into());
        }
        if s.points > 1 && !(s.omega_max > s.omega_min) {
            return bad("scan.omega_max", format!("must exceed omega_min = {}", s.omega_min));
        }
        let a = &self.analysis;
        if !(a.fd_step > 0.0) || !a.fd_step.is_finite() {
            return bad("analysis.fd_step", format!("must be positive, got {}", a.fd_step));
        }
        if !(a.lanczos_tol > 0.0) {
            return bad("analysis.lanczos_tol", format!("must be positive, got {}", a.lanczos_tol));
        }
        if a.orders.is_empty() && matches!(job, Job::DerivativeScan) {
            return bad("analysis.orders", "needs at least one coherence order".into());
        }
        let p = &self.protocol;
        if matches!(job, Job::Echo | Job::PseudoEcho | Job::LaaRamp) {
            if p.chi_tau.is_empty() {
                return bad("protocol.chi_tau", "needs at least one ramp duration".into());
            }
            if let Some(i) = p.chi_tau.iter().position(|t| !(*t > 0.0) || !t.is_finite()) {
                return bad(&format!("protocol.chi_tau[{i}]"), "must be positive and finite".into());
            }
            if !(p.omega_tau > 0.0) || !(p.omega0 > p.omega_tau) || !p.omega0.is_finite() {
                return bad("protocol.omega0", "need omega0 > omega_tau > 0".into());
            }
            if p.steps == Some(0) {
                return bad("protocol.steps", "must be at least 1".into());
            }
        }
        if let Some(k) = p.phi_samples {
            let need = 2 * a.m_max.unwrap_or(m.n_spins) + 1;
            if k < need {
                return bad("protocol.phi_samples", format!("{k} samples alias orders up to m_max; need >= {need}"));
            }
        }
        if matches!(job, Job::ScalingFit) {
            let sizes = &self.scaling.sizes;
            if sizes.len() < 4 {
                return bad("scaling.sizes", format!("power-law fit needs >= 4 sizes, got {}", sizes.len()));
            }
            if let Some(i) = sizes.iter().position(|&n| n < 4) {
                return bad(&format!("scaling.sizes[{i}]"), "sizes must be at least 4".into());
            }
            if !matches!(m.kind, ModelKind::Lmg | ModelKind::Tfi) {
                return bad("model.kind", "scaling-fit supports LMG and TFI".into());
            }
        }
        if matches!(job, Job::DisorderSweep) {
            if !matches!(m.kind, ModelKind::Rfti | ModelKind::Tfi) {
                return bad("model.kind", "disorder-sweep needs RFTI (or TFI)".into());
            }
            if self.disorder.realizations == 0 {
                return bad("disorder.realizations", "must be at least 1".into());
            }
            if self.disorder.sigmas.is_empty() {
                return bad("disorder.sigmas", "needs at least one disorder strength".into());
            }
            if let Some(i) = self.disorder.sigmas.iter().position(|s| !(*s >= 0.0) || !s.is_finite()) {
                return bad(&format!("disorder.sigmas[{i}]"), "must be finite and >= 0".into());
            }
        }
        if self.workers == Some(0) {
            return bad("workers", "must be at least 1".into());
        }
        Ok(())
    }
}
