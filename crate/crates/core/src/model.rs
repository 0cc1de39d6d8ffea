use serde::{Deserialize, Serialize};

use crate::error::{MqcError, Result};
use crate::state::SpinBasis;
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModelKind {
    /// All-to-all Ising coupling plus transverse field, Dicke basis.
    Lmg,
    /// Nearest-neighbour Ising chain in a transverse field.
    Tfi,
    /// TFI plus next-nearest-neighbour Ising coupling `gamma`.
    Annni,
    /// TFI plus site-random longitudinal fields.
    Rfti,
}

impl ModelKind {
    pub fn is_lattice(self) -> bool {
        !matches!(self, ModelKind::Lmg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Boundary {
    #[default]
    Periodic,
}

/// Declarative Hamiltonian description shared by every model builder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelKind,
    pub n_spins: usize,
    #[serde(default = "default_chi")]
    pub chi: f64,
    pub omega: f64,
    /// Next-nearest-neighbour coupling; ANNNI only.
    #[serde(default)]
    pub gamma: f64,
    /// Disorder strength `Delta`; RFTI only.
    #[serde(default)]
    pub disorder_sigma: f64,
    /// Longitudinal fields `delta_i`; RFTI only.
    #[serde(default)]
    pub disorder_fields: Option<Vec<f64>>,
    #[serde(default)]
    pub boundary: Boundary,
}

fn default_chi() -> f64 {
    1.0
}

impl ModelSpec {
    pub fn lmg(n_spins: usize, chi: f64, omega: f64) -> Self {
        Self::base(ModelKind::Lmg, n_spins, chi, omega)
    }

    pub fn tfi(n_spins: usize, chi: f64, omega: f64) -> Self {
        Self::base(ModelKind::Tfi, n_spins, chi, omega)
    }

    pub fn annni(n_spins: usize, chi: f64, omega: f64, gamma: f64) -> Self {
        Self { gamma, ..Self::base(ModelKind::Annni, n_spins, chi, omega) }
    }

    pub fn rfti(n_spins: usize, chi: f64, omega: f64, sigma: f64, fields: Vec<f64>) -> Self {
        Self {
            disorder_sigma: sigma,
            disorder_fields: Some(fields),
            ..Self::base(ModelKind::Rfti, n_spins, chi, omega)
        }
    }

    fn base(model: ModelKind, n_spins: usize, chi: f64, omega: f64) -> Self {
        Self {
            model,
            n_spins,
            chi,
            omega,
            gamma: 0.0,
            disorder_sigma: 0.0,
            disorder_fields: None,
            boundary: Boundary::Periodic,
        }
    }

    pub fn with_omega(&self, omega: f64) -> Self {
        Self { omega, ..self.clone() }
    }

    /// `gamma`, or zero unless the model is ANNNI.
    pub fn effective_gamma(&self) -> f64 {
        if self.model == ModelKind::Annni {
            self.gamma
        } else {
            0.0
        }
    }

    /// Longitudinal fields for RFTI, `None` for every other model.
    pub fn effective_fields(&self) -> Option<&[f64]> {
        match self.model {
            ModelKind::Rfti => self.disorder_fields.as_deref(),
            _ => None,
        }
    }

    pub fn basis(&self) -> Result<SpinBasis> {
        match self.model {
            ModelKind::Lmg => SpinBasis::dicke(self.n_spins),
            _ => SpinBasis::bitstring(self.n_spins),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_cap(tolerance::DEFAULT_BITSTRING_CAP)
    }

    pub fn validate_with_cap(&self, bitstring_cap: usize) -> Result<()> {
        if self.n_spins < 2 {
            return Err(MqcError::InvalidModel(format!("need N >= 2, got {}", self.n_spins)));
        }
        if self.model.is_lattice() && self.n_spins > bitstring_cap {
            return Err(MqcError::InvalidModel(format!(
                "N = {} exceeds the bitstring cap of {bitstring_cap}",
                self.n_spins
            )));
        }
        for (name, v) in [("chi", self.chi), ("omega", self.omega), ("gamma", self.gamma)] {
            if !v.is_finite() {
                return Err(MqcError::InvalidModel(format!("{name} must be finite")));
            }
        }
        if self.omega < 0.0 {
            return Err(MqcError::InvalidModel("omega must be non-negative".into()));
        }
        if self.model == ModelKind::Rfti {
            if !(self.disorder_sigma >= 0.0) {
                return Err(MqcError::InvalidModel("disorder_sigma must be >= 0".into()));
            }
            if let Some(fields) = &self.disorder_fields {
                if fields.len() != self.n_spins {
                    return Err(MqcError::InvalidModel(format!(
                        "{} disorder fields for {} spins",
                        fields.len(),
                        self.n_spins
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_and_fields_only_apply_to_their_models() {
        let mut tfi = ModelSpec::tfi(6, 1.0, 0.5);
        tfi.gamma = 0.7;
        tfi.disorder_fields = Some(vec![1.0; 6]);
        assert_eq!(tfi.effective_gamma(), 0.0);
        assert!(tfi.effective_fields().is_none());
        assert_eq!(ModelSpec::annni(6, 1.0, 0.5, 0.3).effective_gamma(), 0.3);
    }

    #[test]
    fn validation_rejects_small_and_oversized_systems() {
        assert!(ModelSpec::lmg(1, 1.0, 1.0).validate().is_err());
        assert!(ModelSpec::lmg(5000, 1.0, 1.0).validate().is_ok());
        assert!(ModelSpec::tfi(25, 1.0, 1.0).validate().is_err());
        assert!(ModelSpec::tfi(25, 1.0, 1.0).validate_with_cap(26).is_ok());
        assert!(ModelSpec::rfti(4, 1.0, 1.0, 0.1, vec![0.0; 3]).validate().is_err());
    }
}
