use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{MqcError, Result};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumKind {
    /// Fourier coefficients of a time-reversed echo (or a ground-state FOTOC).
    TrueEcho,
    /// Effective intensities from an echo without sign reversal; complex in general.
    PseudoEcho,
    /// Closed-form or free-fermion evaluation.
    Analytic,
}

/// Intensities `I_m` for `m = -m_max ..= m_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MqcSpectrum {
    orders: Vec<i64>,
    intensities: Vec<C64>,
    kind: SpectrumKind,
}

impl MqcSpectrum {
    /// `intensities[j]` belongs to order `j - m_max`.
    pub fn new(m_max: usize, intensities: Vec<C64>, kind: SpectrumKind) -> Result<Self> {
        if intensities.len() != 2 * m_max + 1 {
            return Err(MqcError::DimensionMismatch {
                expected: 2 * m_max + 1,
                got: intensities.len(),
            });
        }
        let m = m_max as i64;
        Ok(Self { orders: (-m..=m).collect(), intensities, kind })
    }

    pub fn from_real(m_max: usize, intensities: &[f64], kind: SpectrumKind) -> Result<Self> {
        Self::new(m_max, intensities.iter().map(|&x| C64::new(x, 0.0)).collect(), kind)
    }

    /// Builds a symmetric spectrum from a function of `m`.
    pub fn from_fn(m_max: usize, kind: SpectrumKind, f: impl Fn(i64) -> f64) -> Self {
        let m = m_max as i64;
        let intensities = (-m..=m).map(|k| C64::new(f(k), 0.0)).collect();
        Self { orders: (-m..=m).collect(), intensities, kind }
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn m_max(&self) -> usize {
        (self.orders.len() - 1) / 2
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn intensities(&self) -> &[C64] {
        &self.intensities
    }

    /// `I_m`, zero outside the stored range.
    pub fn get(&self, m: i64) -> C64 {
        let idx = m + self.m_max() as i64;
        if idx < 0 || idx as usize >= self.intensities.len() {
            C64::new(0.0, 0.0)
        } else {
            self.intensities[idx as usize]
        }
    }

    /// Real part of `I_m`.
    pub fn real(&self, m: i64) -> f64 {
        self.get(m).re
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.orders.iter().copied().zip(self.intensities.iter().copied())
    }

    pub fn total(&self) -> C64 {
        self.intensities.iter().sum()
    }

    /// Checks reality, positivity and `m <-> -m` symmetry for true and
    /// analytic spectra, and that the sum matches `f_at_zero`.
    pub fn check_invariants(&self, f_at_zero: f64) -> Result<()> {
        let tol = tolerance::SPECTRUM_INVARIANT;
        if self.kind != SpectrumKind::PseudoEcho {
            for (m, v) in self.iter() {
                if v.im.abs() > tol {
                    return Err(MqcError::Domain(format!("I_{m} has imaginary part {:.3e}", v.im)));
                }
                if v.re < -tol {
                    return Err(MqcError::Domain(format!("I_{m} = {:.3e} is negative", v.re)));
                }
                if (v - self.get(-m)).norm() > tol {
                    return Err(MqcError::Domain(format!("I_{m} != I_{}", -m)));
                }
            }
        }
        let total = self.total();
        if (total.re - f_at_zero).abs() > tolerance::SPECTRUM_SUM {
            return Err(MqcError::Domain(format!(
                "intensities sum to {:.12} instead of {f_at_zero}",
                total.re
            )));
        }
        Ok(())
    }

    /// Largest `|I_m|` over odd `m`.
    pub fn max_odd(&self) -> f64 {
        self.iter().filter(|(m, _)| m % 2 != 0).map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }
}

/// Sampled fidelity OTOC `F_phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FotocCurve {
    pub phis: Vec<f64>,
    pub values: Vec<f64>,
}

impl FotocCurve {
    pub fn new(phis: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if phis.len() != values.len() {
            return Err(MqcError::DimensionMismatch { expected: phis.len(), got: values.len() });
        }
        Ok(Self { phis, values })
    }

    /// Samples `f` on `samples` uniform points of `[0, 2 pi)`.
    pub fn sample(samples: usize, f: impl Fn(f64) -> f64) -> Self {
        let phis = uniform_phis(samples);
        let values = phis.iter().map(|&p| f(p)).collect();
        Self { phis, values }
    }

    /// Fallible counterpart of [`FotocCurve::sample`].
    pub fn try_sample(samples: usize, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let phis = uniform_phis(samples);
        let values = phis.iter().map(|&p| f(p)).collect::<Result<_>>()?;
        Ok(Self { phis, values })
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    pub fn in_range(&self) -> bool {
        let t = tolerance::FOTOC_RANGE;
        self.values.iter().all(|&v| v >= -t && v <= 1.0 + t)
    }
}

/// `phi_j = 2 pi j / samples`.
pub fn uniform_phis(samples: usize) -> Vec<f64> {
    (0..samples).map(|j| std::f64::consts::TAU * j as f64 / samples as f64).collect()
}

/// Default number of rotation angles for `N` spins, enough to resolve every
/// coherence order `|m| <= N` without aliasing.
pub fn default_phi_samples(n_spins: usize) -> usize {
    2 * n_spins + 2
}
