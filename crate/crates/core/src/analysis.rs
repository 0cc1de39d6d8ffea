//! Fourier analysis of FOTOC curves and quantum-phase-transition diagnostics:
//! spectral widths, finite-difference scans, peak location, power-law fits
//! and disorder averages.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MqcError, Result};
use crate::spectrum::{FotocCurve, MqcSpectrum, SpectrumKind};
use crate::tolerance;

/// `I_m = (1/K) sum_j F(phi_j) e^{i m phi_j}` for `|m| <= m_max`.
///
/// The curve must sit on `K >= 2 m_max + 1` uniform points of `[0, 2 pi)`.
/// True and analytic spectra are checked against the spectrum invariants.
pub fn intensities_from_fotoc(curve: &FotocCurve, m_max: usize, kind: SpectrumKind) -> Result<MqcSpectrum> {
    let k = curve.len();
    if k < 2 * m_max + 1 {
        return Err(MqcError::Aliasing { samples: k, m_max });
    }
    for (j, &phi) in curve.phis.iter().enumerate() {
        let expected = std::f64::consts::TAU * j as f64 / k as f64;
        if (phi - expected).abs() > 1e-12 {
            return Err(MqcError::InvalidGrid(format!("phi[{j}] = {phi}, expected {expected}")));
        }
    }
    let m = m_max as i64;
    let intensities: Vec<C64> = (-m..=m)
        .map(|order| {
            curve
                .phis
                .iter()
                .zip(&curve.values)
                .map(|(p, f)| C64::from_polar(*f, order as f64 * p))
                .sum::<C64>()
                / k as f64
        })
        .collect();
    let spectrum = MqcSpectrum::new(m_max, intensities, kind)?;
    if kind != SpectrumKind::PseudoEcho {
        spectrum.check_invariants(curve.values[0])?;
    }
    Ok(spectrum)
}

/// `sum_m I_m e^{-i m phi}` at each angle (real part).
pub fn resynthesize(spectrum: &MqcSpectrum, phis: &[f64]) -> Vec<f64> {
    phis.iter()
        .map(|&p| spectrum.iter().map(|(m, v)| v * C64::from_polar(1.0, -(m as f64) * p)).sum::<C64>().re)
        .collect()
}

/// `sigma_MQC = sqrt(sum_m m^2 I_m)`.
pub fn spectrum_width(s: &MqcSpectrum) -> f64 {
    s.iter().map(|(m, v)| (m * m) as f64 * v.re).sum::<f64>().max(0.0).sqrt()
}

/// `sum_m m^2 |I_m|`.
pub fn curvature(s: &MqcSpectrum) -> f64 {
    s.iter().map(|(m, v)| (m * m) as f64 * v.norm()).sum()
}

/// Quantum Fisher information lower bound `2 sum_m m^2 |I_m|`.
pub fn qfi_lower_bound(s: &MqcSpectrum) -> f64 {
    2.0 * curvature(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeScan {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub second_derivative: Vec<f64>,
    pub fd_step: f64,
}

/// Central second differences `(f(x + d) - 2 f(x) + f(x - d)) / d^2` on every
/// grid point, evaluated in parallel.
pub fn second_derivative_scan<F>(quantity: F, grid: &[f64], fd_step: f64) -> Result<DerivativeScan>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(fd_step > 0.0) {
        return Err(MqcError::InvalidGrid(format!("fd_step must be positive, got {fd_step}")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(MqcError::InvalidGrid("scan grid must be strictly ascending".into()));
    }
    let triples = grid
        .par_iter()
        .map(|&x| Ok((quantity(x - fd_step)?, quantity(x)?, quantity(x + fd_step)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(scan_from_triples(grid, &triples, fd_step))
}

/// Assembles a scan from precomputed `(f(x - d), f(x), f(x + d))` triples.
pub fn scan_from_triples(grid: &[f64], triples: &[(f64, f64, f64)], fd_step: f64) -> DerivativeScan {
    let d2 = fd_step * fd_step;
    DerivativeScan {
        omegas: grid.to_vec(),
        values: triples.iter().map(|t| t.1).collect(),
        second_derivative: triples.iter().map(|(a, b, c)| (a - 2.0 * b + c) / d2).collect(),
        fd_step,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeakSide {
    Positive,
    Negative,
}

impl PeakSide {
    fn sign(self) -> f64 {
        match self {
            PeakSide::Positive => 1.0,
            PeakSide::Negative => -1.0,
        }
    }
}

/// Grid argmax of `values` (or argmin for `Negative`), refined by the vertex
/// of the parabola through the three points around it.
pub fn locate_peak_in(xs: &[f64], values: &[f64], side: PeakSide) -> Result<f64> {
    if xs.len() != values.len() || xs.len() < 3 {
        return Err(MqcError::InvalidGrid("peak search needs at least three points".into()));
    }
    let s = side.sign();
    let i = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if s * v > s * values[best] { i } else { best });
    if i == 0 || i == values.len() - 1 {
        return Err(MqcError::PeakOnBoundary { index: i });
    }
    let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
    let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        return Ok(x1);
    }
    Ok((x1 - 0.5 * num / den).clamp(x0, x2))
}

/// Peak of the scan's second derivative on the requested side.
pub fn locate_peak(scan: &DerivativeScan, side: PeakSide) -> Result<f64> {
    locate_peak_in(&scan.omegas, &scan.second_derivative, side)
}

/// Height of the extremum above the mean of the background, in units of the
/// background standard deviation. The background is every point farther than
/// a tenth of the scan (at least two points) from the extremum.
pub fn peak_prominence(values: &[f64], side: PeakSide) -> f64 {
    let s = side.sign();
    let n = values.len();
    if n < 3 {
        return 0.0;
    }
    let i = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if s * v > s * values[best] { i } else { best });
    let half_width = (n / 10).max(2);
    let background: Vec<f64> = values
        .iter()
        .enumerate()
        .filter(|(j, _)| j.abs_diff(i) > half_width)
        .map(|(_, v)| s * v)
        .collect();
    if background.len() < 2 {
        return 0.0;
    }
    let (mean, std) = mean_std(&background);
    let height = s * values[i] - mean;
    if std == 0.0 {
        return if height > 0.0 { f64::INFINITY } else { 0.0 };
    }
    height / std
}

/// Default prominence, in background standard deviations, for a resolvable peak.
pub const PROMINENCE_THRESHOLD: f64 = 5.0;

/// Whether the scan's second derivative has a peak at least
/// [`PROMINENCE_THRESHOLD`] background standard deviations high.
pub fn has_resolvable_peak(scan: &DerivativeScan, side: PeakSide) -> bool {
    peak_prominence(&scan.second_derivative, side) >= PROMINENCE_THRESHOLD
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub n_values: Vec<f64>,
    pub offsets: Vec<f64>,
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
}

/// Least-squares slope of `ln(offset)` against `ln(N)`.
pub fn fit_power_law(sizes: &[f64], offsets: &[f64]) -> Result<ScalingFit> {
    if sizes.len() != offsets.len() {
        return Err(MqcError::DimensionMismatch { expected: sizes.len(), got: offsets.len() });
    }
    if sizes.len() < 4 {
        return Err(MqcError::InvalidInput(format!("power-law fit needs >= 4 sizes, got {}", sizes.len())));
    }
    if let Some(bad) = offsets.iter().chain(sizes).find(|v| !(**v > 0.0)) {
        return Err(MqcError::Domain(format!("power-law fit needs positive data, got {bad}")));
    }
    let xs: Vec<f64> = sizes.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = offsets.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let lo = sizes.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sizes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingFit {
        n_values: sizes.to_vec(),
        offsets: offsets.to_vec(),
        exponent: slope,
        exponent_stderr: stderr,
        prefactor: intercept.exp(),
        window: (lo, hi),
    })
}

/// One disorder realization: spectra on an `Omega` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSweep {
    pub omegas: Vec<f64>,
    pub spectra: Vec<MqcSpectrum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedSweep {
    pub omegas: Vec<f64>,
    pub orders: Vec<i64>,
    /// `mean[i][j]` is the average of `Re I_{orders[j]}` at `omegas[i]`.
    pub mean: Vec<Vec<f64>>,
    pub sem: Vec<Vec<f64>>,
    pub realizations: usize,
}

/// Mean and standard error of the mean, element-wise over equal-length rows.
pub fn mean_and_sem(rows: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    let first = rows.first().ok_or_else(|| MqcError::InvalidInput("no realizations to average".into()))?;
    if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
        return Err(MqcError::DimensionMismatch { expected: first.len(), got: bad.len() });
    }
    let n = rows.len() as f64;
    let mut mean = vec![0.0; first.len()];
    for r in rows {
        mean.iter_mut().zip(r).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let sem = if rows.len() < 2 {
        vec![0.0; first.len()]
    } else {
        (0..first.len())
            .map(|j| {
                let var = rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            })
            .collect()
    };
    Ok((mean, sem))
}

/// Uniformly weighted average of per-realization spectra with standard errors.
pub fn disorder_average(results: &[SpectrumSweep]) -> Result<AveragedSweep> {
    let first = results.first().ok_or_else(|| MqcError::InvalidInput("no realizations to average".into()))?;
    let orders = first
        .spectra
        .first()
        .map(|s| s.orders().to_vec())
        .ok_or_else(|| MqcError::InvalidInput("empty sweep".into()))?;
    for r in results {
        if r.omegas.len() != first.omegas.len()
            || r.omegas.iter().zip(&first.omegas).any(|(a, b)| a != b)
            || r.spectra.len() != r.omegas.len()
            || r.spectra.iter().any(|s| s.orders() != orders.as_slice())
        {
            return Err(MqcError::InvalidGrid("realizations use different (Omega, m) grids".into()));
        }
    }
    let mut mean = Vec::with_capacity(first.omegas.len());
    let mut sem = Vec::with_capacity(first.omegas.len());
    for i in 0..first.omegas.len() {
        let rows: Vec<Vec<f64>> =
            results.iter().map(|r| r.spectra[i].intensities().iter().map(|v| v.re).collect()).collect();
        let (m, s) = mean_and_sem(&rows)?;
        mean.push(m);
        sem.push(s);
    }
    Ok(AveragedSweep { omegas: first.omegas.clone(), orders, mean, sem, realizations: results.len() })
}

/// Grid location of the largest value, e.g. the cusp of `I_2` in the LMG
/// model. It sits next to the transition on the paramagnetic side.
pub fn cusp_argmax(omegas: &[f64], values: &[f64]) -> Option<f64> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<usize>, (i, v)| match best {
            Some(b) if values[b] >= *v => Some(b),
            _ => Some(i),
        })
        .map(|i| omegas[i])
}

/// Uniform grid `lo, lo + step, ..., <= hi`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

/// Checks the sum rule and symmetry of a true spectrum against `F(0)`.
pub fn check_true_spectrum(s: &MqcSpectrum, f_at_zero: f64) -> Result<()> {
    s.check_invariants(f_at_zero)?;
    if s.max_odd() > tolerance::SPECTRUM_INVARIANT {
        return Err(MqcError::Domain(format!("odd-order intensity {:.3e}", s.max_odd())));
    }
    Ok(())
}
