//! Parameter sweeps behind the finite-size and disorder studies: derivative
//! peaks versus system size and disorder-averaged derivative scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    disorder_average, fit_power_law, linear_grid, locate_peak_in, mean_and_sem, peak_prominence,
    second_derivative_scan, DerivativeScan, PeakSide, ScalingFit, SpectrumSweep, PROMINENCE_THRESHOLD,
};
use crate::error::{MqcError, Result};
use crate::lattice::{draw_disorder, intensity_derivative_scan, SparseSpinHamiltonian};
use crate::linalg::LanczosOptions;
use crate::lmg::{LmgHamiltonian, SxEigenbasis};
use crate::model::ModelSpec;
use crate::spectrum::{MqcSpectrum, SpectrumKind};
use crate::tfi;

/// Positive peaks of `d^2 I_0/dOmega^2` and `d^2 I_2/dOmega^2` at one size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizePeaks {
    pub n_spins: usize,
    /// `(Omega/chi)_*` from `I_0`.
    pub peak0: f64,
    pub height0: f64,
    /// `(Omega/chi)_*` from `I_2`.
    pub peak2: f64,
    pub height2: f64,
}

fn argmax(values: &[f64]) -> usize {
    values.iter().enumerate().fold(0, |b, (i, v)| if *v > values[b] { i } else { b })
}

/// Coarse scan over `coarse`, then a fine scan of `fine_points` points within
/// `half_width` of the coarse maximum. Returns the refined location and the
/// largest fine-grid value.
fn two_stage_peak(
    coarse: &[f64],
    half_width: f64,
    fine_points: usize,
    d2: impl Fn(f64) -> Result<f64> + Sync,
) -> Result<(f64, f64)> {
    let c: Vec<f64> = coarse.par_iter().map(|&w| d2(w)).collect::<Result<_>>()?;
    let centre = coarse[argmax(&c)];
    let fine = linear_grid(centre - half_width, centre + half_width, fine_points);
    let f: Vec<f64> = fine.par_iter().map(|&w| d2(w)).collect::<Result<_>>()?;
    let peak = locate_peak_in(&fine, &f, PeakSide::Positive)?;
    Ok((peak, f[argmax(&f)]))
}

/// LMG `I_0` and `I_2` of the even-block ground state.
pub fn lmg_low_orders(sx: &SxEigenbasis, chi: f64, omega: f64) -> Result<(f64, f64)> {
    let n = sx.n_spins();
    let (_, state) = LmgHamiltonian::new(n, chi, omega).ground_state()?;
    let p = sx.distribution(&state)?;
    let i0 = p.iter().map(|x| x * x).sum();
    let i2 = p[..n - 1].iter().zip(&p[2..]).map(|(a, b)| a * b).sum();
    Ok((i0, i2))
}

/// LMG derivative peaks on the ferromagnetic side, from central differences
/// of step `fd_step` (`chi = 1`).
pub fn lmg_size_peaks(n_spins: usize, fd_step: f64) -> Result<SizePeaks> {
    let sx = SxEigenbasis::new(n_spins)?;
    let d2 = |w: f64, order: usize| -> Result<f64> {
        let pick = |x: (f64, f64)| if order == 0 { x.0 } else { x.1 };
        let lo = pick(lmg_low_orders(&sx, 1.0, w - fd_step)?);
        let mid = pick(lmg_low_orders(&sx, 1.0, w)?);
        let hi = pick(lmg_low_orders(&sx, 1.0, w + fd_step)?);
        Ok((lo - 2.0 * mid + hi) / (fd_step * fd_step))
    };
    let coarse = linear_grid(0.80, 1.02, 111);
    let (peak0, height0) = two_stage_peak(&coarse, 0.004, 41, |w| d2(w, 0))?;
    let (peak2, height2) = two_stage_peak(&coarse, 0.004, 41, |w| d2(w, 2))?;
    Ok(SizePeaks { n_spins, peak0, height0, peak2, height2 })
}

/// TFI derivative peaks from the exact `g`-derivative of the product-form
/// FOTOC, scanned in `x = (1 - g) N^2`: a coarse pass over `[-3, 8]`, then a
/// fine pass of half-width 0.5 around each coarse maximum.
pub fn tfi_size_peaks(n_spins: usize) -> Result<SizePeaks> {
    let nn = (n_spins * n_spins) as f64;
    let d2 = |x: f64, order: i64| -> Result<f64> {
        Ok(tfi::intensity_second_derivatives(1.0 - x / nn, n_spins, &[order])[0])
    };
    let coarse = linear_grid(-3.0, 8.0, 23);
    let (x0, height0) = two_stage_peak(&coarse, 0.5, 11, |x| d2(x, 0))?;
    let (x2, height2) = two_stage_peak(&coarse, 0.5, 11, |x| d2(x, 2))?;
    Ok(SizePeaks { n_spins, peak0: 1.0 - x0 / nn, height0, peak2: 1.0 - x2 / nn, height2 })
}

/// Power-law fits of the peak offsets `1 - (Omega/chi)_*` and heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeScaling {
    pub peaks: Vec<SizePeaks>,
    pub offset0: ScalingFit,
    pub offset2: ScalingFit,
    pub height0: ScalingFit,
    pub height2: ScalingFit,
}

pub fn fit_size_peaks(peaks: Vec<SizePeaks>) -> Result<SizeScaling> {
    let ns: Vec<f64> = peaks.iter().map(|p| p.n_spins as f64).collect();
    let col = |f: fn(&SizePeaks) -> f64| peaks.iter().map(f).collect::<Vec<f64>>();
    Ok(SizeScaling {
        offset0: fit_power_law(&ns, &col(|p| 1.0 - p.peak0))?,
        offset2: fit_power_law(&ns, &col(|p| 1.0 - p.peak2))?,
        height0: fit_power_law(&ns, &col(|p| p.height0))?,
        height2: fit_power_law(&ns, &col(|p| p.height2))?,
        peaks,
    })
}

/// `d^2 I_m / dOmega^2` scan of a model's ground state, by central differences.
///
/// LMG uses the even Dicke block, TFI the analytic product form, ANNNI and
/// RFTI warm-started Lanczos in the natural sector.
pub fn ground_derivative_scan(
    spec: &ModelSpec,
    grid: &[f64],
    fd_step: f64,
    orders: &[i64],
    opts: &LanczosOptions,
) -> Result<Vec<DerivativeScan>> {
    match spec.model {
        crate::ModelKind::Lmg => {
            spec.validate()?;
            let sx = SxEigenbasis::new(spec.n_spins)?;
            orders
                .iter()
                .map(|&m| {
                    second_derivative_scan(
                        |w| {
                            let (_, st) = LmgHamiltonian::new(spec.n_spins, spec.chi, w).ground_state()?;
                            Ok(sx.mqc_spectrum(&st)?.real(m))
                        },
                        grid,
                        fd_step,
                    )
                })
                .collect()
        }
        crate::ModelKind::Tfi => {
            if spec.n_spins < 2 || !(spec.chi > 0.0) {
                return Err(MqcError::InvalidModel("TFI scan needs N >= 2 and chi > 0".into()));
            }
            orders
            .iter()
            .map(|&m| {
                second_derivative_scan(
                    |w| Ok(tfi::intensities_at(w / spec.chi, spec.n_spins, &[m])[0]),
                    grid,
                    fd_step,
                )
            })
            .collect()
        }
        _ => intensity_derivative_scan(&SparseSpinHamiltonian::new(spec)?, grid, fd_step, orders, opts),
    }
}

/// Disorder-averaged `I_0` and `d^2 I_0/dOmega^2` with the peak diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderSweep {
    pub sigma: f64,
    pub seeds: Vec<u64>,
    pub omegas: Vec<f64>,
    pub mean_i0: Vec<f64>,
    pub sem_i0: Vec<f64>,
    pub mean_d2: Vec<f64>,
    pub sem_d2: Vec<f64>,
    /// `None` when the peak sits on the scan boundary.
    pub peak: Option<f64>,
    pub prominence: f64,
    pub resolvable: bool,
}

/// Realization seeds `base, base + 1, ...` (wrapping).
pub fn realization_seeds(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|r| base.wrapping_add(r)).collect()
}

/// RFTI derivative scans for each seed, averaged over realizations.
pub fn disorder_sweep(
    n_spins: usize,
    chi: f64,
    sigma: f64,
    seeds: &[u64],
    grid: &[f64],
    fd_step: f64,
    opts: &LanczosOptions,
) -> Result<DisorderSweep> {
    if seeds.is_empty() {
        return Err(MqcError::InvalidInput("disorder sweep needs at least one seed".into()));
    }
    let scans: Vec<DerivativeScan> = seeds
        .par_iter()
        .map(|&seed| {
            let d = draw_disorder(seed, sigma, n_spins)?;
            let h = SparseSpinHamiltonian::new(&d.model(chi, grid[0]))?;
            Ok(intensity_derivative_scan(&h, grid, fd_step, &[0], opts)?.remove(0))
        })
        .collect::<Result<_>>()?;
    let sweeps: Vec<SpectrumSweep> = scans
        .iter()
        .map(|s| {
            let spectra = s
                .values
                .iter()
                .map(|&v| MqcSpectrum::from_real(0, &[v], SpectrumKind::TrueEcho))
                .collect::<Result<_>>()?;
            Ok(SpectrumSweep { omegas: s.omegas.clone(), spectra })
        })
        .collect::<Result<_>>()?;
    let avg = disorder_average(&sweeps)?;
    let mean_i0 = avg.mean.iter().map(|row| row[0]).collect();
    let sem_i0 = avg.sem.iter().map(|row| row[0]).collect();
    let rows: Vec<Vec<f64>> = scans.iter().map(|s| s.second_derivative.clone()).collect();
    let (mean_d2, sem_d2) = mean_and_sem(&rows)?;
    let peak = locate_peak_in(grid, &mean_d2, PeakSide::Positive).ok();
    let prominence = peak_prominence(&mean_d2, PeakSide::Positive);
    Ok(DisorderSweep {
        sigma,
        seeds: seeds.to_vec(),
        omegas: grid.to_vec(),
        mean_i0,
        sem_i0,
        mean_d2,
        sem_d2,
        peak,
        prominence,
        resolvable: peak.is_some() && prominence >= PROMINENCE_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tfi_peaks_sit_on_the_ferromagnetic_side() {
        let p = tfi_size_peaks(200).unwrap();
        assert!(p.peak0 < 1.0 && p.peak0 > 1.0 - 3.0 / 40_000.0);
        assert!(p.height0 > 0.0 && p.height2 > 0.0);
    }

    #[test]
    fn lmg_peak_approaches_critical_point() {
        let a = lmg_size_peaks(100, 1e-4).unwrap();
        let b = lmg_size_peaks(200, 1e-4).unwrap();
        assert!(a.peak0 < b.peak0 && b.peak0 < 1.0);
        assert!(b.height0 > a.height0);
    }

    #[test]
    fn zero_disorder_sweep_matches_clean_scan() {
        let grid = linear_grid(0.6, 1.4, 9);
        let opts = LanczosOptions::with_tol(1e-12);
        let s = disorder_sweep(8, 1.0, 0.0, &[3, 4], &grid, 1e-4, &opts).unwrap();
        let clean = ground_derivative_scan(&ModelSpec::tfi(8, 1.0, 1.0), &grid, 1e-4, &[0], &opts).unwrap();
        for (a, b) in s.mean_i0.iter().zip(&clean[0].values) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(s.sem_i0.iter().all(|&x| x < 1e-12));
    }

    #[test]
    fn seeds_are_consecutive() {
        assert_eq!(realization_seeds(u64::MAX, 2), vec![u64::MAX, 0]);
    }
}
