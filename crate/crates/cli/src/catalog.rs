//! Named figure-reproduction recipes shipped with the binary.

use std::fmt;

use crate::config::{self, Job};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    /// Seconds.
    Fast,
    /// Up to a few minutes; suitable for CI.
    CiScale,
    /// Tens of minutes to hours.
    LongRunning,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Fast => "fast",
            Tier::CiScale => "ci-scale",
            Tier::LongRunning => "long-running",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Recipe {
    pub name: &'static str,
    pub job: Job,
    pub tier: Tier,
    pub runtime: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

macro_rules! recipe {
    ($name:literal, $job:ident, $tier:ident, $rt:literal, $desc:literal) => {
        Recipe {
            name: $name,
            job: Job::$job,
            tier: Tier::$tier,
            runtime: $rt,
            description: $desc,
            config: include_str!(concat!("../recipes/", $name, ".toml")),
        }
    };
}

pub const RECIPES: &[Recipe] = &[
    recipe!("fig1-lmg-n250-spectrum", GroundSpectrum, Fast, "<1 s", "LMG N=250 ground-state MQC spectrum, width and order parameter"),
    recipe!("fig1-tfi-n20-spectrum", GroundSpectrum, Fast, "~1 s", "TFI N=20 analytic ground-state MQC spectrum and width"),
    recipe!("fig2-lmg-derivatives", DerivativeScan, Fast, "<1 s", "LMG N=250 I_0, I_2 and their second derivatives"),
    recipe!("fig2-tfi-derivatives", DerivativeScan, Fast, "<1 s", "TFI N=100 analytic I_0, I_2 and their second derivatives"),
    recipe!("fig3-lmg-n50", PseudoEcho, Fast, "<1 s", "LMG N=50 pseudo-echo intensities after LAA ramps, chi*tau = 10, 100"),
    recipe!("fig3-tfi-n14", PseudoEcho, CiScale, "~30 s", "TFI N=14 pseudo-echo surrogate, chi*tau = 10, 100"),
    recipe!("fig3-tfi-n20", PseudoEcho, LongRunning, "~hours", "TFI N=20 pseudo-echo, chi*tau = 10, 100"),
    recipe!("figS1-laa-ramps", LaaRamp, Fast, "<1 s", "LMG N=50 LAA field schedule, chi*tau = 10, Omega/chi 10 -> 0.01"),
    recipe!("figS1-laa-ramps-tfi", LaaRamp, Fast, "<1 s", "TFI N=20 LAA field schedule, chi*tau = 10, Omega/chi 100 -> 0.01"),
    recipe!("figS2-echo-lmg", PseudoEcho, Fast, "<1 s", "LMG N=50 ideal vs pseudo echo over ramp durations"),
    recipe!("figS4-lmg-scaling", ScalingFit, Fast, "~5 s", "LMG finite-size scaling of the d2I_0 peak, N = 200..1600"),
    recipe!("figS4-tfi-scaling", ScalingFit, Fast, "~5 s", "TFI finite-size scaling of the d2I_0 peak, N = 200..5000"),
    recipe!("figS5-annni-n20", DerivativeScan, LongRunning, "~30 min", "ANNNI N=20 Lanczos scan of d2I_0 (set model.gamma)"),
    recipe!("figS5-rfti-disorder", DisorderSweep, LongRunning, "~hours", "RFTI N=20 disorder-averaged d2I_0, Delta/chi = 0.1, 1.0"),
    recipe!("figS5-rfti-n12-surrogate", DisorderSweep, CiScale, "~30 s", "RFTI N=12 ten-seed surrogate of the disorder sweep"),
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    RECIPES.iter().find(|r| r.name == name)
}

impl Recipe {
    /// Disorder realizations for sweep recipes.
    pub fn seed_count(&self) -> Option<usize> {
        if self.job != Job::DisorderSweep {
            return None;
        }
        let doc = self.config.parse::<toml::Table>().ok()?;
        config::from_document(doc).ok().map(|c| c.disorder.realizations)
    }
}

/// One line per recipe: name, job, tier, expected runtime, parameters, description.
pub fn listing() -> String {
    let mut out = String::new();
    for r in RECIPES {
        let params = r.seed_count().map(|s| format!("realizations={s}")).unwrap_or_default();
        out.push_str(&format!(
            "{:<26} {:<16} {:<13} {:<8} {:<17} {}\n",
            r.name,
            r.job.name(),
            r.tier.to_string(),
            r.runtime,
            params,
            r.description
        ));
    }
    out
}
