//! Free-fermion solution of the periodic transverse-field Ising chain.
//!
//! The ground state lives in the even-fermion-parity (antiperiodic) sector,
//! whose quasimomenta are `k = 2 pi (n + 1/2) / N` with `0 < k < pi`. All
//! functions take the field ratio `g = Omega / chi`.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::analysis::intensities_from_fotoc;
use crate::error::{MqcError, Result};
use crate::special::binomial_over_four_pow;
use crate::spectrum::{default_phi_samples, uniform_phis, FotocCurve, MqcSpectrum, SpectrumKind};

/// Logarithms below this are flushed to a FOTOC of exactly zero.
const LOG_FLUSH: f64 = -700.0;

/// Largest imaginary part tolerated in the complex closed form.
const BRANCH_RESIDUE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasimomentumGrid {
    pub n_spins: usize,
    pub modes: Vec<f64>,
}

impl QuasimomentumGrid {
    pub fn new(n_spins: usize) -> Self {
        let n = n_spins as f64;
        let modes = (0..n_spins / 2).map(|i| TAU * (i as f64 + 0.5) / n).collect();
        Self { n_spins, modes }
    }
}

/// Mode energy `2 sqrt(g^2 - 2 g cos k + 1)` in units of `chi / 2`.
pub fn dispersion(k: f64, g: f64) -> f64 {
    2.0 * (g * g - 2.0 * g * k.cos() + 1.0).max(0.0).sqrt()
}

/// `theta_k = atan2(sin k, cos k - g)`, continuous in `g` for `0 < k < pi`.
pub fn bogoliubov_angle(k: f64, g: f64) -> f64 {
    k.sin().atan2(k.cos() - g)
}

/// `f(k, g) = sin^2 k / (1 - 2 g cos k + g^2) = sin^2 theta_k`.
pub fn pairing_weight(k: f64, g: f64) -> f64 {
    let s = k.sin();
    s * s / (1.0 - 2.0 * g * k.cos() + g * g)
}

/// `prod_k [1 - sin^2(phi) f(k, g)]`, accumulated in log space.
pub fn fotoc_product(g: f64, phi: f64, n_spins: usize) -> f64 {
    let s2 = phi.sin().powi(2);
    let grid = QuasimomentumGrid::new(n_spins);
    let mut log_f = 0.0;
    for &k in &grid.modes {
        let h = 1.0 - s2 * pairing_weight(k, g);
        if h <= 0.0 {
            return 0.0;
        }
        log_f += h.ln();
    }
    if log_f < LOG_FLUSH {
        0.0
    } else {
        log_f.exp().min(1.0)
    }
}

/// `ln cos w`, stable for large `|Im w|`.
fn ln_cos(w: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let sigma = if w.im >= 0.0 { 1.0 } else { -1.0 };
    let u = (2.0 * i * sigma * w).exp();
    -i * sigma * w - LN_2 + (1.0 + u).ln()
}

/// `ln(1 + g^N)` without overflow.
fn ln_one_plus_pow(g: f64, n: f64) -> f64 {
    let lg = n * g.ln();
    if lg > 0.0 {
        lg + (-lg).exp().ln_1p()
    } else {
        lg.exp().ln_1p()
    }
}

/// The roots `X_+` and `X_-` that factorize each mode term, in complex
/// arithmetic with principal branches. `X_+` is rationalized so it stays
/// accurate as `sin phi -> 0`.
pub fn x_roots(g: f64, phi: f64) -> (C64, C64) {
    let s2 = phi.sin().powi(2);
    let a = (1.0 - s2) * (1.0 - s2 / (g * g));
    let root = C64::new(a, 0.0).sqrt();
    let x_plus = 0.5 * (1.0 - g * (1.0 + 1.0 / (g * g) - s2 / (g * g)) / (1.0 + root));
    let x_minus = 0.5 * (1.0 - g / s2 * (1.0 + root));
    (x_plus, x_minus)
}

/// Closed-form FOTOC
/// `4/(1+g^N) (sin(phi)/2)^N cos(N asin sqrt X_+) cos(N asin sqrt X_-)`,
/// for even `N`. For odd `N` the cosine products are divided by
/// `cos(asin sqrt X_+) cos(asin sqrt X_-)` and the prefactor gains
/// `(1 + g) / (2 |sin phi|)`, the odd-`N` value of the mode-product identities.
///
/// Evaluated in the complex log domain; a result whose imaginary part
/// exceeds `1e-8` is reported as a branch inconsistency.
pub fn fotoc_closed_form(g: f64, phi: f64, n_spins: usize) -> Result<f64> {
    if !(g > 0.0) {
        return Err(MqcError::Domain(format!("closed form needs g > 0, got {g}")));
    }
    let s = phi.sin().abs();
    if s == 0.0 {
        return Ok(1.0);
    }
    let n = n_spins as f64;
    let (xp, xm) = x_roots(g, phi);
    let zp = xp.sqrt().asin();
    let zm = xm.sqrt().asin();
    let mut log_f = C64::new(2.0 * LN_2 - ln_one_plus_pow(g, n) + n * (s / 2.0).ln(), 0.0);
    log_f += ln_cos(zp * n) + ln_cos(zm * n);
    if n_spins % 2 == 1 {
        log_f -= ln_cos(zp) + ln_cos(zm);
        log_f += ((1.0 + g) / (2.0 * s)).ln();
    }
    if log_f.re < LOG_FLUSH {
        return Ok(0.0);
    }
    let f = log_f.exp();
    if f.im.abs() > BRANCH_RESIDUE || !f.re.is_finite() {
        return Err(MqcError::BranchInconsistency { residue: f.im.abs() });
    }
    Ok(f.re)
}

/// Continuum limit `((1 + sqrt(1 - 4 sin^2(phi) A_1(g))) / 2)^N` with
/// `A_1 = 1/4` for `g < 1` and `1/(4 g^2)` for `g > 1`; undefined at `g = 1`.
pub fn fotoc_continuum(g: f64, phi: f64, n_spins: usize) -> Result<f64> {
    let a1 = if g < 1.0 {
        0.25
    } else if g > 1.0 {
        0.25 / (g * g)
    } else {
        return Err(MqcError::Domain("continuum FOTOC is undefined at g = 1".into()));
    };
    let s2 = phi.sin().powi(2);
    let base = 0.5 * (1.0 + (1.0 - 4.0 * s2 * a1).max(0.0).sqrt());
    Ok(base.powi(n_spins as i32))
}

/// Critical-point intensity `(2/4^N) C(2N, N-m)` for even `m`, else 0.
pub fn mqc_critical(n_spins: usize, m: i64) -> f64 {
    let n = n_spins as u64;
    let k = m.unsigned_abs();
    if m % 2 != 0 || k > n {
        return 0.0;
    }
    2.0 * binomial_over_four_pow(2 * n, n - k, n)
}

/// Gaussian large-`N` intensity `2/sqrt(pi N) exp(-m^2/N)` of the ferromagnet.
pub fn mqc_ferromagnetic_large_n(n_spins: usize, m: i64) -> f64 {
    let n = n_spins as f64;
    if m % 2 != 0 {
        return 0.0;
    }
    2.0 / (PI * n).sqrt() * (-((m * m) as f64) / n).exp()
}

/// FOTOC at one angle: closed form, falling back to the product when the
/// closed form's branches disagree.
fn fotoc_exact(g: f64, phi: f64, n_spins: usize) -> f64 {
    match fotoc_closed_form(g, phi, n_spins) {
        Ok(v) => v.clamp(0.0, 1.0),
        Err(_) => fotoc_product(g, phi, n_spins),
    }
}

/// Ground-state FOTOC curve on `samples` uniform angles.
pub fn fotoc_curve(g: f64, n_spins: usize, samples: usize) -> FotocCurve {
    let phis = uniform_phis(samples);
    let values = phis.par_iter().map(|&p| fotoc_exact(g, p, n_spins)).collect();
    FotocCurve { phis, values }
}

/// Full MQC spectrum of the TFI ground state from a `2N + 2` point transform
/// of the exact FOTOC.
pub fn mqc_from_fotoc_analytic(g: f64, n_spins: usize) -> Result<MqcSpectrum> {
    let curve = fotoc_curve(g, n_spins, default_phi_samples(n_spins));
    intensities_from_fotoc(&curve, n_spins, SpectrumKind::Analytic)
}

/// Selected intensities `I_m` (real parts) from the exact FOTOC.
pub fn intensities_at(g: f64, n_spins: usize, orders: &[i64]) -> Vec<f64> {
    let k = default_phi_samples(n_spins);
    let curve = fotoc_curve(g, n_spins, k);
    orders.iter().map(|&m| fourier_coefficient(&curve.phis, &curve.values, m)).collect()
}

fn fourier_coefficient(phis: &[f64], values: &[f64], m: i64) -> f64 {
    let k = phis.len() as f64;
    phis.iter().zip(values).map(|(p, v)| v * (m as f64 * p).cos()).sum::<f64>() / k
}

/// `d^2 I_m / dg^2` of the ground state, from the exact second derivative of
/// the product form at every sample angle.
pub fn intensity_second_derivatives(g: f64, n_spins: usize, orders: &[i64]) -> Vec<f64> {
    let samples = default_phi_samples(n_spins);
    let phis = uniform_phis(samples);
    let grid = QuasimomentumGrid::new(n_spins);
    // per mode: (f, f', f'')
    let weights: Vec<(f64, f64, f64)> = grid
        .modes
        .iter()
        .map(|&k| {
            let (s, c) = k.sin_cos();
            let d = 1.0 - 2.0 * g * c + g * g;
            let s2 = s * s;
            let f1 = 2.0 * s2 * (c - g) / (d * d);
            let f2 = 2.0 * s2 * (-1.0 / (d * d) + 4.0 * (c - g).powi(2) / (d * d * d));
            (s2 / d, f1, f2)
        })
        .collect();
    let second: Vec<f64> = phis
        .par_iter()
        .map(|&phi| {
            let sp = phi.sin().powi(2);
            let mut log_f = 0.0;
            let mut first_sum = 0.0;
            let mut second_sum = 0.0;
            for &(f, f1, f2) in &weights {
                let h = 1.0 - sp * f;
                if h <= 0.0 {
                    return 0.0;
                }
                let r1 = -sp * f1 / h;
                let r2 = -sp * f2 / h;
                log_f += h.ln();
                first_sum += r1;
                second_sum += r2 - r1 * r1;
            }
            if log_f < LOG_FLUSH {
                0.0
            } else {
                log_f.exp() * (first_sum * first_sum + second_sum)
            }
        })
        .collect();
    orders.iter().map(|&m| fourier_coefficient(&phis, &second, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn grid_has_half_zone_modes() {
        let g = QuasimomentumGrid::new(7);
        assert_eq!(g.modes.len(), 3);
        assert!(g.modes.iter().all(|&k| k > 0.0 && k < PI));
        assert_eq!(QuasimomentumGrid::new(8).modes.len(), 4);
    }

    #[test]
    fn dispersion_examples() {
        assert_relative_eq!(dispersion(PI, 1.0), 4.0);
        assert!(dispersion(1e-9, 1.0) < 1e-8);
        for g in [0.2, 0.9, 3.0] {
            assert_relative_eq!(dispersion(0.0, g), 2.0 * (g - 1.0f64).abs(), max_relative = 1e-12);
        }
    }

    #[test]
    fn bogoliubov_angle_examples() {
        assert_relative_eq!(bogoliubov_angle(0.7, 0.0), 0.7, max_relative = 1e-15);
        assert_relative_eq!(bogoliubov_angle(FRAC_PI_2, 1.0), 3.0 * PI / 4.0, max_relative = 1e-15);
        assert!((bogoliubov_angle(1.0, 1e8) - PI).abs() < 1e-7);
        for &k in &QuasimomentumGrid::new(12).modes {
            assert_relative_eq!(bogoliubov_angle(k, 0.6).sin().powi(2), pairing_weight(k, 0.6), max_relative = 1e-12);
        }
    }

    #[test]
    fn product_form_special_values() {
        assert_eq!(fotoc_product(0.8, 0.0, 10), 1.0);
        // g = 1: sin^{2N}(phi/2) + cos^{2N}(phi/2)
        assert_relative_eq!(fotoc_product(1.0, FRAC_PI_2, 4), 0.125, max_relative = 1e-13);
        for phi in [0.3f64, 1.1, 2.9] {
            let exact = (phi / 2.0).sin().powi(20) + (phi / 2.0).cos().powi(20);
            assert_relative_eq!(fotoc_product(1.0, phi, 10), exact, max_relative = 1e-12);
        }
        assert_relative_eq!(fotoc_product(0.7, 1.1, 12), fotoc_product(0.7, TAU - 1.1, 12), max_relative = 1e-14);
        assert_relative_eq!(fotoc_product(0.7, 1.1, 12), fotoc_product(0.7, -1.1, 12), max_relative = 1e-14);
    }

    #[test]
    fn closed_form_roots_at_criticality() {
        let phi = 0.9;
        let (xp, xm) = x_roots(1.0, phi);
        assert!(xp.norm() < 1e-15);
        assert_relative_eq!(xm.re, -1.0 / phi.tan().powi(2), max_relative = 1e-12);
    }

    #[test]
    fn chebyshev_identity_for_even_n() {
        // cos(N asin sqrt X) = T_{N/2}(1 - 2X)
        let (xp, _) = x_roots(1.5, 0.7);
        let n = 10;
        let lhs = (xp.sqrt().asin() * n as f64).cos();
        let y = 1.0 - 2.0 * xp;
        let (mut t0, mut t1) = (C64::new(1.0, 0.0), y);
        for _ in 1..n / 2 {
            let t2 = 2.0 * y * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        assert!((lhs - t1).norm() < 1e-12);
    }

    #[test]
    fn closed_form_equals_product_form() {
        let gs = [0.3, 0.7, 1.0, 1.5, 3.0];
        for n in 3..=24 {
            for &g in &gs {
                for j in 0..21 {
                    let phi = TAU * j as f64 / 21.0;
                    let c = fotoc_closed_form(g, phi, n).unwrap();
                    let p = fotoc_product(g, phi, n);
                    assert!((c - p).abs() < 1e-10, "N={n} g={g} phi={phi}: {c} vs {p}");
                }
            }
        }
        assert!((fotoc_closed_form(1.5, 0.7, 20).unwrap() - fotoc_product(1.5, 0.7, 20)).abs() < 1e-10);
    }

    #[test]
    fn closed_form_survives_large_n() {
        for g in [0.5, 0.99, 1.01, 2.0] {
            for phi in [0.05, 0.4, 1.3] {
                let c = fotoc_closed_form(g, phi, 2000).unwrap();
                let p = fotoc_product(g, phi, 2000);
                assert!((c - p).abs() < 1e-10, "g={g} phi={phi}: {c} vs {p}");
            }
        }
    }

    #[test]
    fn continuum_limit() {
        let phi: f64 = 0.8;
        assert_relative_eq!(
            fotoc_continuum(0.5, phi, 20).unwrap(),
            ((1.0 + phi.cos().abs()) / 2.0).powi(20),
            max_relative = 1e-13
        );
        let expected = ((1.0 + 3f64.sqrt() / 2.0) / 2.0).powi(20);
        assert_relative_eq!(fotoc_continuum(2.0, FRAC_PI_2, 20).unwrap(), expected, max_relative = 1e-13);
        assert!((expected - 0.2499).abs() < 1e-4);
        assert!(fotoc_continuum(1.0, 0.3, 20).is_err());

        for n in [20, 40, 80, 160] {
            for g in [0.5, 2.0] {
                let rate = |f: f64| -f.ln() / n as f64;
                let diff = rate(fotoc_continuum(g, 1.0, n).unwrap()) - rate(fotoc_product(g, 1.0, n));
                assert!(diff.abs() < 1e-6, "N={n} g={g}: {diff}");
            }
        }
    }

    #[test]
    fn critical_spectrum() {
        assert_relative_eq!(mqc_critical(2, 0), 0.75);
        assert_relative_eq!(mqc_critical(2, 2), 0.125);
        assert_relative_eq!(mqc_critical(2, -2), 0.125);
        assert_eq!(mqc_critical(2, 1), 0.0);
        let total: f64 = (-20..=20).map(|m| mqc_critical(20, m)).sum();
        assert!((total - 1.0).abs() < 1e-14);

        let n = 20;
        let k = 2 * n + 2;
        let curve: Vec<f64> = uniform_phis(k)
            .iter()
            .map(|p| (p / 2.0).sin().powi(2 * n as i32) + (p / 2.0).cos().powi(2 * n as i32))
            .collect();
        let i0 = fourier_coefficient(&uniform_phis(k), &curve, 0);
        assert!((i0 - mqc_critical(n, 0)).abs() < 1e-12);
    }

    #[test]
    fn ferromagnetic_gaussian() {
        assert_relative_eq!(mqc_ferromagnetic_large_n(100, 0), 0.11284, epsilon = 1e-5);
        let d100 = (mqc_ferromagnetic_large_n(100, 0) / mqc_critical(100, 0) - 1.0).abs();
        let d400 = (mqc_ferromagnetic_large_n(400, 0) / mqc_critical(400, 0) - 1.0).abs();
        assert!(d400 < d100);
        assert!(mqc_ferromagnetic_large_n(100, 60) < 1e-10);
    }

    #[test]
    fn analytic_spectra() {
        let crit = mqc_from_fotoc_analytic(1.0, 20).unwrap();
        for m in -20..=20 {
            assert!((crit.real(m) - mqc_critical(20, m)).abs() < 1e-10);
        }
        let para = mqc_from_fotoc_analytic(10.0, 20).unwrap();
        assert!(para.real(0) > 0.97 && para.real(2) > 0.0);
        let ferro = mqc_from_fotoc_analytic(0.5, 100).unwrap();
        assert!((ferro.real(0) / mqc_ferromagnetic_large_n(100, 0) - 1.0).abs() < 0.05);
        for s in [&crit, &para, &ferro] {
            assert!((s.total().re - 1.0).abs() < 1e-10);
            assert!(s.iter().all(|(_, v)| v.re > -1e-12));
        }
    }

    #[test]
    fn analytic_second_derivative_matches_finite_differences() {
        let n = 60;
        for g in [0.8, 0.97, 1.05] {
            let d = 1e-3;
            let f = |x: f64| intensities_at(x, n, &[0, 2]);
            let (a, b, c) = (f(g - d), f(g), f(g + d));
            let exact = intensity_second_derivatives(g, n, &[0, 2]);
            for i in 0..2 {
                let fd = (a[i] - 2.0 * b[i] + c[i]) / (d * d);
                assert!((fd - exact[i]).abs() < 1e-3 * exact[i].abs().max(1.0), "g={g}: {fd} vs {}", exact[i]);
            }
        }
    }
}
