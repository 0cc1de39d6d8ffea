//! Lipkin-Meshkov-Glick model `H = -(chi/N) S_z^2 - Omega S_x` in the Dicke
//! basis, plus the Holstein-Primakoff and GHZ closed forms for its MQC
//! intensities.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{MqcError, Result};
use crate::linalg::tridiag;
use crate::linalg::Tridiagonal;
use crate::model::{ModelKind, ModelSpec};
use crate::special::{binomial_over_four_pow, harmonic_number, hyp2f1};
use crate::spectrum::{MqcSpectrum, SpectrumKind};
use crate::state::{SpinBasis, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct LmgHamiltonian {
    pub n_spins: usize,
    pub chi: f64,
    pub omega: f64,
    matrix: Tridiagonal,
}

/// `sqrt(S(S+1) - m(m+1))` for the ladder step `m -> m + 1`.
fn ladder(s: f64, m: f64) -> f64 {
    (s * (s + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

pub fn build_lmg(spec: &ModelSpec) -> Result<LmgHamiltonian> {
    if spec.model != ModelKind::Lmg {
        return Err(MqcError::InvalidModel(format!("{:?} is not an LMG model", spec.model)));
    }
    spec.validate()?;
    Ok(LmgHamiltonian::new(spec.n_spins, spec.chi, spec.omega))
}

impl LmgHamiltonian {
    pub fn new(n_spins: usize, chi: f64, omega: f64) -> Self {
        let s = n_spins as f64 / 2.0;
        let n = n_spins as f64;
        let ms: Vec<f64> = (0..=n_spins).map(|i| i as f64 - s).collect();
        let diag = ms.iter().map(|m| -chi * m * m / n).collect();
        let off = ms[..n_spins].iter().map(|&m| -0.5 * omega * ladder(s, m)).collect();
        Self { n_spins, chi, omega, matrix: Tridiagonal::new(diag, off) }
    }

    pub fn basis(&self) -> SpinBasis {
        SpinBasis::dicke(self.n_spins).expect("N >= 1")
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.matrix.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.matrix.off
    }

    pub fn matrix(&self) -> &Tridiagonal {
        &self.matrix
    }

    /// The block of states even under `m -> -m`, in the basis `|0>`,
    /// `(|k> + |-k>)/sqrt2` (`N` even) or `(|k> + |-k>)/sqrt2`, `k >= 1/2`
    /// (`N` odd).
    pub fn even_block(&self) -> Tridiagonal {
        let n = self.n_spins;
        let d = &self.matrix.diag;
        let o = &self.matrix.off;
        let centre = n / 2;
        if n % 2 == 0 {
            // block index k <-> full index centre + k
            let diag: Vec<f64> = (0..=centre).map(|k| d[centre + k]).collect();
            let mut off: Vec<f64> = (0..centre).map(|k| o[centre + k]).collect();
            if let Some(first) = off.first_mut() {
                *first *= std::f64::consts::SQRT_2;
            }
            Tridiagonal::new(diag, off)
        } else {
            // block index k <-> m = k + 1/2 <-> full index centre + 1 + k
            let top = centre + 1;
            let mut diag: Vec<f64> = (0..=centre).map(|k| d[top + k]).collect();
            diag[0] += o[centre];
            let off = (0..centre).map(|k| o[top + k]).collect();
            Tridiagonal::new(diag, off)
        }
    }

    /// Full Dicke amplitudes of an even-block vector.
    pub fn expand_even(&self, block: &[f64]) -> Vec<f64> {
        let n = self.n_spins;
        let centre = n / 2;
        let mut full = vec![0.0; n + 1];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        if n % 2 == 0 {
            full[centre] = block[0];
            for k in 1..=centre {
                full[centre + k] = block[k] * r;
                full[centre - k] = block[k] * r;
            }
        } else {
            for k in 0..=centre {
                full[centre + 1 + k] = block[k] * r;
                full[centre - k] = block[k] * r;
            }
        }
        full
    }

    /// `k`-th lowest eigenvalue of the even block.
    pub fn even_eigenvalue(&self, k: usize) -> f64 {
        let b = self.even_block();
        tridiag::kth_eigenvalue(&b.diag, &b.off, k)
    }

    /// Ground state energy and state from the even block.
    pub fn ground_state(&self) -> Result<(f64, StateVector)> {
        let b = self.even_block();
        let (energy, v) = tridiag::lowest_eigenpair(&b.diag, &b.off)?;
        let state = StateVector::from_real(self.basis(), &self.expand_even(&v))?.with_fixed_phase();
        Ok((energy, state))
    }

    /// Gap between the two lowest even-sector levels.
    pub fn even_gap(&self) -> f64 {
        let b = self.even_block();
        if b.diag.len() < 2 {
            return f64::INFINITY;
        }
        tridiag::kth_eigenvalue(&b.diag, &b.off, 1) - tridiag::kth_eigenvalue(&b.diag, &b.off, 0)
    }
}

/// Lowest eigenvector of the LMG Hamiltonian with the global phase fixed.
///
/// The ground state lies in the sector even under `m -> -m`; only that block
/// is diagonalized, which keeps the ferromagnetic parity doublet from mixing.
pub fn lmg_ground_state(h: &LmgHamiltonian) -> Result<StateVector> {
    Ok(h.ground_state()?.1)
}

/// Eigenvectors of `S_x` in the Dicke z-basis, for exact rotations and
/// x-basis distributions.
#[derive(Debug, Clone)]
pub struct SxEigenbasis {
    n_spins: usize,
    /// Row `j` is the eigenvector of eigenvalue `j - N/2`.
    rows: Vec<Vec<f64>>,
}

impl SxEigenbasis {
    pub fn new(n_spins: usize) -> Result<Self> {
        let s = n_spins as f64 / 2.0;
        let diag = vec![0.0; n_spins + 1];
        let off: Vec<f64> = (0..n_spins).map(|i| 0.5 * ladder(s, i as f64 - s)).collect();
        let rows = (0..=n_spins)
            .into_par_iter()
            .map(|j| tridiag::inverse_iteration(&diag, &off, j as f64 - s).map(|(v, _)| v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_spins, rows })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        let expected = SpinBasis::dicke(self.n_spins)?;
        if state.basis() != expected {
            return Err(MqcError::BasisMismatch { left: expected.to_string(), right: state.basis().to_string() });
        }
        Ok(())
    }

    /// Amplitudes `<m_x|psi>` ordered by ascending `m_x`.
    pub fn coefficients(&self, state: &StateVector) -> Result<Vec<C64>> {
        self.check(state)?;
        Ok(self.coefficients_of(state.amplitudes()))
    }

    /// [`SxEigenbasis::coefficients`] on raw Dicke amplitudes.
    pub fn coefficients_of(&self, a: &[C64]) -> Vec<C64> {
        self.rows.iter().map(|row| row.iter().zip(a).map(|(r, x)| x * r).sum()).collect()
    }

    /// `exp(-i phi S_x)` on raw Dicke amplitudes.
    pub fn rotate_amplitudes(&self, a: &[C64], phi: f64) -> Vec<C64> {
        let c = self.coefficients_of(a);
        let s = self.n_spins as f64 / 2.0;
        let mut out = vec![C64::new(0.0, 0.0); self.n_spins + 1];
        for (j, (row, cj)) in self.rows.iter().zip(&c).enumerate() {
            let w = cj * C64::from_polar(1.0, -phi * (j as f64 - s));
            for (o, r) in out.iter_mut().zip(row) {
                *o += w * r;
            }
        }
        out
    }

    /// Probabilities of each `S_x` eigenvalue, ascending.
    pub fn distribution(&self, state: &StateVector) -> Result<Vec<f64>> {
        Ok(self.coefficients(state)?.iter().map(|c| c.norm_sqr()).collect())
    }

    /// `exp(-i phi S_x) |psi>`, exact.
    pub fn rotate(&self, state: &StateVector, phi: f64) -> Result<StateVector> {
        self.check(state)?;
        StateVector::new(state.basis(), self.rotate_amplitudes(state.amplitudes(), phi))
    }

    /// `|<psi| exp(-i phi S_x) |psi>|^2`.
    pub fn fotoc(&self, state: &StateVector, phi: f64) -> Result<f64> {
        let p = self.distribution(state)?;
        let s = self.n_spins as f64 / 2.0;
        let amp: C64 = p.iter().enumerate().map(|(j, pj)| C64::from_polar(*pj, -phi * (j as f64 - s))).sum();
        Ok(amp.norm_sqr())
    }

    /// True MQC spectrum of a pure state, `I_m = sum_n p_n p_{n+m}`.
    pub fn mqc_spectrum(&self, state: &StateVector) -> Result<MqcSpectrum> {
        Ok(autocorrelation_spectrum(&self.distribution(state)?, SpectrumKind::TrueEcho))
    }
}

/// `I_m = sum_n p_n p_{n+m}` for a distribution over consecutive eigenvalues.
pub fn autocorrelation_spectrum(p: &[f64], kind: SpectrumKind) -> MqcSpectrum {
    let m_max = p.len() - 1;
    MqcSpectrum::from_fn(m_max, kind, |m| {
        let k = m.unsigned_abs() as usize;
        p[..p.len() - k].iter().zip(&p[k..]).map(|(a, b)| a * b).sum()
    })
}

/// `<|S_z|>` of a Dicke-basis state.
pub fn order_parameter_abs_sz(state: &StateVector) -> f64 {
    let b = state.basis();
    state.probabilities().iter().enumerate().map(|(i, p)| p * b.sz(i).abs()).sum()
}

/// Bogoliubov squeezing of the paramagnet, `tanh(2r) = chi / (2 Omega - chi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParameter {
    pub r: f64,
}

impl SqueezeParameter {
    pub fn from_ratio(omega_over_chi: f64) -> Result<Self> {
        if !(omega_over_chi > 1.0) || !omega_over_chi.is_finite() {
            return Err(MqcError::Domain(format!(
                "squeezing needs the paramagnetic phase Omega/chi > 1, got {omega_over_chi}"
            )));
        }
        let x = 1.0 / (2.0 * omega_over_chi - 1.0);
        Ok(Self { r: 0.5 * x.atanh() })
    }

    /// `tanh r`, evaluated without cancellation.
    pub fn tanh(&self) -> f64 {
        self.r.tanh()
    }
}

fn check_even(m: i64) -> Option<u64> {
    if m % 2 != 0 {
        None
    } else {
        Some(m.unsigned_abs())
    }
}

/// Holstein-Primakoff intensity of the LMG paramagnet at even coherence
/// order `m`, normalized by the `sech^2 r` prefactor.
pub fn hp_intensity(m: i64, omega_over_chi: f64) -> Result<f64> {
    SqueezeParameter::from_ratio(omega_over_chi)?;
    let Some(m) = check_even(m) else { return Ok(0.0) };
    let x = 1.0 / (2.0 * omega_over_chi - 1.0);
    // tanh r from tanh 2r, stable near x -> 1
    let t = x / (1.0 + ((1.0 - x) * (1.0 + x)).sqrt());
    let sech2 = 1.0 - t * t;
    let m_f = m as f64;
    let hyp = hyp2f1(0.5, 0.5 * (1.0 + m_f), 0.5 * (2.0 + m_f), t.powi(4))?;
    Ok(sech2 * binomial_over_four_pow(m, m / 2, m / 2) * hyp * t.powf(m_f))
}

fn near_critical_eps(omega_over_chi: f64) -> Result<f64> {
    if !(omega_over_chi > 1.0) {
        return Err(MqcError::Domain(format!("expansion needs Omega/chi > 1, got {omega_over_chi}")));
    }
    Ok(omega_over_chi - 1.0)
}

/// Leading small-`epsilon` behaviour of [`hp_intensity`], `epsilon = Omega/chi - 1`:
/// `(2/pi) sqrt(eps) [-2 H_{(m-1)/2} - 2 ln 2 - ln eps]`.
pub fn hp_intensity_near_critical(m: i64, omega_over_chi: f64) -> Result<f64> {
    let eps = near_critical_eps(omega_over_chi)?;
    let Some(m) = check_even(m) else { return Ok(0.0) };
    let h = harmonic_number((m as f64 - 1.0) / 2.0)?;
    Ok(2.0 / PI * eps.sqrt() * (-2.0 * h - 2.0 * LN_2 - eps.ln()))
}

/// Second derivative of the near-critical expansion with respect to
/// `Omega/chi`: `[ln 4 + 2 H_{(m-1)/2} + ln eps] / (2 pi eps^{3/2})`.
pub fn hp_second_derivative_asymptote(m: i64, omega_over_chi: f64) -> Result<f64> {
    let eps = near_critical_eps(omega_over_chi)?;
    let Some(m) = check_even(m) else { return Ok(0.0) };
    let h = harmonic_number((m as f64 - 1.0) / 2.0)?;
    Ok((2.0 * LN_2 + 2.0 * h + eps.ln()) / (2.0 * PI * eps.powf(1.5)))
}

/// MQC intensity of the ferromagnetic cat state `(|N/2> + |-N/2>)/sqrt2`:
/// `(2/4^N) C(2N, N-m) + (-1)^{m/2} (2/4^N) C(N, (N-m)/2)` for even `m`.
///
/// The cross term carries the sign of the closed form; a direct rotation of
/// the cat state agrees with it only when `N` is a multiple of 4.
pub fn ghz_intensity(n_spins: usize, m: i64) -> f64 {
    let n = n_spins as u64;
    let k = m.unsigned_abs();
    if m % 2 != 0 || k > n {
        return 0.0;
    }
    let direct = 2.0 * binomial_over_four_pow(2 * n, n - k, n);
    let cross = if (n - k) % 2 == 0 {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * 2.0 * binomial_over_four_pow(n, (n - k) / 2, n)
    } else {
        0.0
    };
    direct + cross
}
