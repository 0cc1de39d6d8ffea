//! Transverse-field ramps and echoes: local-adiabatic schedules, midpoint
//! Krylov propagation, ideal and pseudo echoes and their effective MQC
//! intensities.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{curvature, intensities_from_fotoc};
use crate::error::{MqcError, Result};
use crate::lattice::{
    expand_even, lowest_two_eigenvalues, restrict_even, rotate_amplitudes, sx_cross_amplitudes,
    Sector, SparseSpinHamiltonian,
};
use crate::linalg::{expm_apply, lowest_eigenpair, KrylovOptions, LanczosOptions};
use crate::lmg::{LmgHamiltonian, SxEigenbasis};
use crate::model::{ModelKind, ModelSpec};
use crate::spectrum::{default_phi_samples, uniform_phis, FotocCurve, MqcSpectrum, SpectrumKind};
use crate::state::{dot, SpinBasis, StateVector};
use crate::tfi;

/// Number of log-spaced field values tabulated for the LAA inversion.
pub const LAA_NODES: usize = 400;

/// `max(1000, ceil(40 chi tau))` midpoint steps.
pub fn default_steps(chi: f64, tau: f64) -> usize {
    ((40.0 * chi * tau).ceil() as usize).max(1000)
}

/// Energy gap that a parity-preserving ramp couples to.
///
/// LMG: lowest excitation of the even Dicke block. TFI: lowest two-quasiparticle
/// energy `chi * eps(pi/N)`. ANNNI and RFTI: second full-space eigenvalue.
pub fn instantaneous_gap(spec: &ModelSpec) -> Result<f64> {
    spec.validate()?;
    match spec.model {
        ModelKind::Lmg => Ok(LmgHamiltonian::new(spec.n_spins, spec.chi, spec.omega).even_gap()),
        ModelKind::Tfi => {
            let k = std::f64::consts::PI / spec.n_spins as f64;
            Ok(spec.chi * tfi::dispersion(k, spec.omega / spec.chi))
        }
        ModelKind::Annni | ModelKind::Rfti => {
            let h = SparseSpinHamiltonian::new(spec)?;
            let (e0, e1) = lowest_two_eigenvalues(&h, &LanczosOptions::default())?;
            Ok(e1 - e0)
        }
    }
}

/// Time grid `t_j = j tau / n` with the field at grid points and at step midpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampSchedule {
    pub times: Vec<f64>,
    pub omegas: Vec<f64>,
    /// `Omega((j - 1/2) tau / n)` for `j = 1..=n`; step `j` uses this field.
    pub midpoint_omegas: Vec<f64>,
    pub tau: f64,
    pub steps: usize,
}

impl RampSchedule {
    fn from_fn(omega0: f64, omega_tau: f64, tau: f64, steps: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(MqcError::InvalidInput(format!("ramp duration must be positive, got {tau}")));
        }
        if steps == 0 {
            return Err(MqcError::InvalidInput("ramp needs at least one step".into()));
        }
        if !(omega0.is_finite() && omega_tau.is_finite()) || omega0 == omega_tau {
            return Err(MqcError::InvalidInput(format!("ramp endpoints {omega0} and {omega_tau} must differ")));
        }
        let dt = tau / steps as f64;
        let times: Vec<f64> = (0..=steps).map(|j| if j == steps { tau } else { j as f64 * dt }).collect();
        let mut omegas: Vec<f64> = times.iter().map(|&t| f(t)).collect();
        omegas[0] = omega0;
        omegas[steps] = omega_tau;
        let midpoint_omegas = (1..=steps).map(|j| f((j as f64 - 0.5) * dt)).collect();
        let s = Self { times, omegas, midpoint_omegas, tau, steps };
        s.check_monotone()?;
        Ok(s)
    }

    /// `Omega(t) = omega0 + (omega_tau - omega0) t / tau`.
    pub fn linear(omega0: f64, omega_tau: f64, tau: f64, steps: usize) -> Result<Self> {
        Self::from_fn(omega0, omega_tau, tau, steps, |t| omega0 + (omega_tau - omega0) * t / tau)
    }

    pub fn dt(&self) -> f64 {
        self.tau / self.steps as f64
    }

    pub fn omega0(&self) -> f64 {
        self.omegas[0]
    }

    pub fn omega_tau(&self) -> f64 {
        self.omegas[self.steps]
    }

    fn check_monotone(&self) -> Result<()> {
        let up = self.omega_tau() > self.omega0();
        let ok = self.omegas.windows(2).all(|w| if up { w[1] > w[0] } else { w[1] < w[0] });
        if ok {
            Ok(())
        } else {
            Err(MqcError::Domain("ramp schedule is not strictly monotone".into()))
        }
    }
}

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d = vec![delta[0]; 2];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self { x, y, d }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let k = self.x.partition_point(|&xi| xi <= t).clamp(1, n - 1) - 1;
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        self.y[k] * (2.0 * s3 - 3.0 * s2 + 1.0)
            + h * self.d[k] * (s3 - 2.0 * s2 + s)
            + self.y[k + 1] * (3.0 * s2 - 2.0 * s3)
            + h * self.d[k + 1] * (s3 - s2)
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Local-adiabatic schedule `dOmega/dt = -Delta(Omega)^2 / gamma` from
/// `omega0` down to `omega_tau` in time `tau`.
///
/// `t(Omega)` is tabulated by the trapezoid rule on [`LAA_NODES`] log-spaced
/// fields and inverted by a monotone cubic interpolant, so a constant gap
/// gives the linear ramp.
pub fn build_laa_schedule<G>(omega0: f64, omega_tau: f64, tau: f64, gap: G, steps: usize) -> Result<RampSchedule>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    if !(omega0 > omega_tau && omega_tau > 0.0) {
        return Err(MqcError::InvalidInput(format!(
            "LAA ramp needs omega0 > omega_tau > 0, got {omega0} and {omega_tau}"
        )));
    }
    let m = LAA_NODES;
    let ratio = (omega0 / omega_tau).ln();
    let mut nodes: Vec<f64> =
        (0..m).map(|i| omega_tau * (ratio * i as f64 / (m - 1) as f64).exp()).collect();
    nodes[0] = omega_tau;
    nodes[m - 1] = omega0;
    let weights = nodes
        .par_iter()
        .map(|&w| {
            let g = gap(w)?;
            if !(g > 0.0 && g.is_finite()) {
                return Err(MqcError::Domain(format!("gap {g} at Omega = {w} is not positive")));
            }
            Ok(1.0 / (g * g))
        })
        .collect::<Result<Vec<f64>>>()?;

    // Cumulative integral from omega0 downwards, ordered by increasing time.
    let mut integral = vec![0.0; m];
    for i in (0..m - 1).rev() {
        integral[i] = integral[i + 1] + 0.5 * (weights[i] + weights[i + 1]) * (nodes[i + 1] - nodes[i]);
    }
    let total = integral[0];
    let t: Vec<f64> = integral.iter().rev().map(|s| tau * s / total).collect();
    let w: Vec<f64> = nodes.iter().rev().copied().collect();
    if !t.windows(2).all(|p| p[1] > p[0]) {
        return Err(MqcError::Domain("LAA time table is not strictly increasing".into()));
    }
    let interp = Pchip::new(t, w);
    RampSchedule::from_fn(omega0, omega_tau, tau, steps, |x| interp.eval(x))
}

/// LAA schedule for a model, with the gap from [`instantaneous_gap`].
pub fn model_laa_schedule(spec: &ModelSpec, omega0: f64, omega_tau: f64, tau: f64, steps: usize) -> Result<RampSchedule> {
    build_laa_schedule(omega0, omega_tau, tau, |w| instantaneous_gap(&spec.with_omega(w)), steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RampOrder {
    Forward,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EchoKind {
    /// Backward leg with the Hamiltonian sign flipped.
    Ideal,
    /// Backward leg with the same sign, parameters in reverse order.
    Pseudo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoResult {
    pub phi: f64,
    /// `|<psi_0| U_back R(phi) U |psi_0>|^2`.
    pub overlap: f64,
    pub kind: EchoKind,
    /// `overlap` at `phi = 0` for the same schedule.
    pub return_fidelity: f64,
}

#[derive(Debug, Clone)]
enum Engine {
    Collective(SxEigenbasis),
    Lattice { h: SparseSpinHamiltonian, sector: Sector },
}

/// A model whose transverse field can be varied, with states held in the
/// smallest representation the ramp preserves.
#[derive(Debug, Clone)]
pub struct QuenchSystem {
    spec: ModelSpec,
    engine: Engine,
    krylov: KrylovOptions,
    lanczos: LanczosOptions,
}

impl QuenchSystem {
    /// LMG in the Dicke basis; lattice models in the even-parity sector when
    /// there are no longitudinal fields.
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        spec.validate()?;
        let engine = if spec.model == ModelKind::Lmg {
            Engine::Collective(SxEigenbasis::new(spec.n_spins)?)
        } else {
            let h = SparseSpinHamiltonian::new(spec)?;
            let sector = h.natural_sector();
            Engine::Lattice { h, sector }
        };
        Ok(Self { spec: spec.clone(), engine, krylov: KrylovOptions::default(), lanczos: LanczosOptions::default() })
    }

    /// Lattice models in all `2^N` states, for arbitrary initial vectors.
    pub fn full_space(spec: &ModelSpec) -> Result<Self> {
        let mut s = Self::new(spec)?;
        if let Engine::Lattice { sector, .. } = &mut s.engine {
            *sector = Sector::Full;
        }
        Ok(s)
    }

    pub fn with_krylov(mut self, opts: KrylovOptions) -> Self {
        self.krylov = opts;
        self
    }

    pub fn with_lanczos(mut self, opts: LanczosOptions) -> Self {
        self.lanczos = opts;
        self
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn n_spins(&self) -> usize {
        self.spec.n_spins
    }

    pub fn basis(&self) -> SpinBasis {
        match self.engine {
            Engine::Collective(_) => SpinBasis::dicke(self.spec.n_spins).expect("validated"),
            Engine::Lattice { .. } => SpinBasis::bitstring(self.spec.n_spins).expect("validated"),
        }
    }

    /// Length of the working vectors.
    pub fn dim(&self) -> usize {
        match &self.engine {
            Engine::Collective(_) => self.spec.n_spins + 1,
            Engine::Lattice { sector: Sector::Full, .. } => 1 << self.spec.n_spins,
            Engine::Lattice { sector: Sector::EvenParity, .. } => 1 << (self.spec.n_spins - 1),
        }
    }

    /// Ground state at field `omega` as a working vector.
    pub fn ground_state(&self, omega: f64) -> Result<Vec<C64>> {
        match &self.engine {
            Engine::Collective(_) => {
                let h = LmgHamiltonian::new(self.spec.n_spins, self.spec.chi, omega);
                Ok(h.ground_state()?.1.into_amplitudes())
            }
            Engine::Lattice { h, sector } => {
                let op = h.operator_at(h.natural_sector(), omega)?;
                let pair = lowest_eigenpair(&op, None, &[], &self.lanczos)?;
                let v = pair.vector.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>();
                Ok(match (h.natural_sector(), sector) {
                    (Sector::EvenParity, Sector::Full) => expand_even(self.spec.n_spins, &v),
                    _ => v,
                })
            }
        }
    }

    /// Overwrites `v` with `exp(-i sign H(omega) dt) v`.
    pub fn propagate_step(&self, v: &mut [C64], omega: f64, dt: f64, sign: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(MqcError::InvalidInput(format!("time step must be positive, got {dt}")));
        }
        let t = sign.signum() * dt;
        match &self.engine {
            Engine::Collective(_) => {
                let h = LmgHamiltonian::new(self.spec.n_spins, self.spec.chi, omega);
                expm_apply(h.matrix(), v, t, &self.krylov)?;
            }
            Engine::Lattice { h, sector } => {
                expm_apply(&h.operator_at(*sector, omega)?, v, t, &self.krylov)?;
            }
        }
        Ok(())
    }

    /// Steps through the schedule's midpoint fields in the given order.
    pub fn run_ramp(&self, v0: &[C64], schedule: &RampSchedule, sign: f64, order: RampOrder) -> Result<Vec<C64>> {
        if v0.len() != self.dim() {
            return Err(MqcError::DimensionMismatch { expected: self.dim(), got: v0.len() });
        }
        let mut v = v0.to_vec();
        let dt = schedule.dt();
        let fields: Box<dyn Iterator<Item = &f64>> = match order {
            RampOrder::Forward => Box::new(schedule.midpoint_omegas.iter()),
            RampOrder::Reversed => Box::new(schedule.midpoint_omegas.iter().rev()),
        };
        for &w in fields {
            self.propagate_step(&mut v, w, dt, sign)?;
        }
        Ok(v)
    }

    /// `exp(-i phi S_x) v`, exact.
    pub fn rotate(&self, v: &[C64], phi: f64) -> Vec<C64> {
        match &self.engine {
            Engine::Collective(sx) => sx.rotate_amplitudes(v, phi),
            Engine::Lattice { sector: Sector::Full, .. } => {
                let mut out = v.to_vec();
                rotate_amplitudes(&mut out, self.spec.n_spins, phi);
                out
            }
            Engine::Lattice { sector: Sector::EvenParity, .. } => {
                let n = self.spec.n_spins;
                let mut out = expand_even(n, v);
                rotate_amplitudes(&mut out, n, phi);
                restrict_even(n, &out)
            }
        }
    }

    /// `q_k = sum over m_x = k - N/2 of conj(<x|a>) <x|b>`, ascending in `m_x`.
    pub fn sx_cross(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        match &self.engine {
            Engine::Collective(sx) => {
                let ca = sx.coefficients_of(a);
                let cb = sx.coefficients_of(b);
                ca.iter().zip(&cb).map(|(x, y)| x.conj() * y).collect()
            }
            Engine::Lattice { sector, .. } => {
                let n = self.spec.n_spins;
                match sector {
                    Sector::Full => sx_cross_amplitudes(a, b, n),
                    Sector::EvenParity => sx_cross_amplitudes(&expand_even(n, a), &expand_even(n, b), n),
                }
            }
        }
    }

    /// Normalized state in the model's full basis.
    pub fn to_state(&self, v: &[C64]) -> Result<StateVector> {
        let amps = match &self.engine {
            Engine::Lattice { sector: Sector::EvenParity, .. } => expand_even(self.spec.n_spins, v),
            _ => v.to_vec(),
        };
        StateVector::new(self.basis(), amps)
    }

    /// Working vector of a state given in the model's full basis.
    pub fn from_state(&self, v: &StateVector) -> Result<Vec<C64>> {
        if v.basis() != self.basis() {
            return Err(MqcError::BasisMismatch { left: self.basis().to_string(), right: v.basis().to_string() });
        }
        Ok(match &self.engine {
            Engine::Lattice { sector: Sector::EvenParity, .. } => restrict_even(self.spec.n_spins, v.amplitudes()),
            _ => v.amplitudes().to_vec(),
        })
    }

    /// True MQC spectrum of the ground state at `omega`.
    pub fn ground_spectrum(&self, omega: f64) -> Result<MqcSpectrum> {
        let v = self.ground_state(omega)?;
        Ok(cross_spectrum(&self.sx_cross(&v, &v), SpectrumKind::TrueEcho))
    }
}

/// `I_m = sum_l q_{l+m} conj(q_l)`: the Fourier coefficients of
/// `|sum_k q_k e^{-i phi m_k}|^2` in the convention of `intensities_from_fotoc`.
pub fn cross_spectrum(q: &[C64], kind: SpectrumKind) -> MqcSpectrum {
    let n = q.len() - 1;
    let m_max = n as i64;
    let values = (-m_max..=m_max)
        .map(|m| {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..=n as i64 {
                let k = l + m;
                if (0..=m_max).contains(&k) {
                    acc += q[k as usize] * q[l as usize].conj();
                }
            }
            if kind == SpectrumKind::PseudoEcho {
                acc
            } else {
                C64::new(acc.re, 0.0)
            }
        })
        .collect();
    MqcSpectrum::new(n, values, kind).expect("2 m_max + 1 orders")
}

fn echo_sign(kind: EchoKind) -> f64 {
    match kind {
        EchoKind::Ideal => -1.0,
        EchoKind::Pseudo => 1.0,
    }
}

fn spectrum_kind(kind: EchoKind) -> SpectrumKind {
    match kind {
        EchoKind::Ideal => SpectrumKind::TrueEcho,
        EchoKind::Pseudo => SpectrumKind::PseudoEcho,
    }
}

/// Ideal and pseudo-echo spectra of one ramp, evaluated exactly in `phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EchoSpectra {
    /// True intensities of the ramped state.
    pub ideal: MqcSpectrum,
    /// Effective intensities from the pseudo echo.
    pub pseudo: MqcSpectrum,
    pub ideal_curve: FotocCurve,
    pub pseudo_curve: FotocCurve,
    /// Pseudo-echo overlap at `phi = 0`.
    pub return_fidelity: f64,
}

/// A forward ramp from the ground state at `Omega(0)`, cached for echoes.
#[derive(Debug, Clone)]
pub struct EchoRun<'a> {
    system: &'a QuenchSystem,
    schedule: &'a RampSchedule,
    initial: Vec<C64>,
    forward: Vec<C64>,
}

impl<'a> EchoRun<'a> {
    pub fn new(system: &'a QuenchSystem, schedule: &'a RampSchedule) -> Result<Self> {
        let initial = system.ground_state(schedule.omega0())?;
        let forward = system.run_ramp(&initial, schedule, 1.0, RampOrder::Forward)?;
        Ok(Self { system, schedule, initial, forward })
    }

    pub fn initial(&self) -> &[C64] {
        &self.initial
    }

    /// `U |psi_0>`.
    pub fn forward(&self) -> &[C64] {
        &self.forward
    }

    /// `|<GS(Omega(tau))| U |psi_0>|^2`.
    pub fn target_fidelity(&self) -> Result<f64> {
        let gs = self.system.ground_state(self.schedule.omega_tau())?;
        Ok(dot(&gs, &self.forward).norm_sqr())
    }

    /// Overlap of the explicit echo: rotation, then a backward ramp in
    /// reversed order.
    pub fn overlap(&self, kind: EchoKind, phi: f64) -> Result<f64> {
        let rotated = self.system.rotate(&self.forward, phi);
        let back = self.system.run_ramp(&rotated, self.schedule, echo_sign(kind), RampOrder::Reversed)?;
        Ok(dot(&self.initial, &back).norm_sqr())
    }

    pub fn echo(&self, kind: EchoKind, phi: f64) -> Result<EchoResult> {
        let overlap = self.overlap(kind, phi)?;
        let return_fidelity = if phi == 0.0 { overlap } else { self.overlap(kind, 0.0)? };
        Ok(EchoResult { phi, overlap, kind, return_fidelity })
    }

    /// Explicit echoes on the `K = 2N + 2` grid, in parallel over `phi`.
    pub fn echo_curve(&self, kind: EchoKind) -> Result<FotocCurve> {
        let phis = uniform_phis(default_phi_samples(self.system.n_spins()));
        let values = phis.par_iter().map(|&p| self.overlap(kind, p)).collect::<Result<Vec<_>>>()?;
        FotocCurve::new(phis, values)
    }

    /// Spectrum of the explicit echo curve.
    pub fn echo_spectrum(&self, kind: EchoKind) -> Result<MqcSpectrum> {
        intensities_from_fotoc(&self.echo_curve(kind)?, self.system.n_spins(), spectrum_kind(kind))
    }

    /// Both spectra from the adjoint form of the echoes.
    ///
    /// The ideal backward leg is `U^dagger`; the pseudo backward leg `V`
    /// satisfies `V^dagger = ` the forward-order ramp with the sign flipped.
    /// Since `R(phi)` is diagonal in the `S_x` basis, each overlap
    /// `<a| R(phi) |psi_tau>` is `sum_k q_k e^{-i phi m_k}` with `q` from
    /// [`QuenchSystem::sx_cross`].
    pub fn spectra(&self) -> Result<EchoSpectra> {
        let adjoint = self.system.run_ramp(&self.initial, self.schedule, -1.0, RampOrder::Forward)?;
        let q_ideal = self.system.sx_cross(&self.forward, &self.forward);
        let q_pseudo = self.system.sx_cross(&adjoint, &self.forward);
        let ideal_curve = curve_from_cross(&q_ideal);
        let pseudo_curve = curve_from_cross(&q_pseudo);
        let return_fidelity = pseudo_curve.values[0];
        Ok(EchoSpectra {
            ideal: cross_spectrum(&q_ideal, SpectrumKind::TrueEcho),
            pseudo: cross_spectrum(&q_pseudo, SpectrumKind::PseudoEcho),
            ideal_curve,
            pseudo_curve,
            return_fidelity,
        })
    }
}

/// `F(phi) = |sum_k q_k e^{-i phi (k - N/2)}|^2` on the default grid.
fn curve_from_cross(q: &[C64]) -> FotocCurve {
    let n = q.len() - 1;
    let half = n as f64 / 2.0;
    FotocCurve::sample(default_phi_samples(n), |phi| {
        q.iter()
            .enumerate()
            .map(|(k, qk)| qk * C64::from_polar(1.0, -phi * (k as f64 - half)))
            .sum::<C64>()
            .norm_sqr()
    })
}

/// `exp(-i sign H dt) |v>` for the model `spec`.
pub fn propagate_step(v: &StateVector, spec: &ModelSpec, dt: f64, sign: f64) -> Result<StateVector> {
    let sys = QuenchSystem::full_space(spec)?;
    let mut w = sys.from_state(v)?;
    sys.propagate_step(&mut w, spec.omega, dt, sign)?;
    StateVector::new(v.basis(), w)
}

/// Ramp of an arbitrary state through the schedule.
pub fn run_ramp(v0: &StateVector, spec: &ModelSpec, schedule: &RampSchedule, sign: f64) -> Result<StateVector> {
    let sys = QuenchSystem::full_space(spec)?;
    let w = sys.run_ramp(&sys.from_state(v0)?, schedule, sign, RampOrder::Forward)?;
    StateVector::new(v0.basis(), w)
}

/// Ideal echo starting from the ground state at `Omega(0)`.
pub fn run_ideal_echo(spec: &ModelSpec, schedule: &RampSchedule, phi: f64) -> Result<EchoResult> {
    let sys = QuenchSystem::new(spec)?;
    EchoRun::new(&sys, schedule)?.echo(EchoKind::Ideal, phi)
}

/// Pseudo echo starting from the ground state at `Omega(0)`.
pub fn run_pseudo_echo(spec: &ModelSpec, schedule: &RampSchedule, phi: f64) -> Result<EchoResult> {
    let sys = QuenchSystem::new(spec)?;
    EchoRun::new(&sys, schedule)?.echo(EchoKind::Pseudo, phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBound {
    /// `sum m^2 |I_m|`.
    pub lhs: f64,
    /// `sum m^2 |I~_m|`.
    pub rhs: f64,
    pub holds: bool,
    /// `2 sum m^2 |I~_m|`, a lower bound on the quantum Fisher information.
    pub qfi_lower_bound: f64,
}

/// Compares the curvature of true and effective intensities of one ramp.
pub fn curvature_bound_check(ideal: &MqcSpectrum, pseudo: &MqcSpectrum) -> CurvatureBound {
    let lhs = curvature(ideal);
    let rhs = curvature(pseudo);
    let slack = 1e-9 * lhs.max(1.0);
    CurvatureBound { lhs, rhs, holds: lhs + slack >= rhs, qfi_lower_bound: 2.0 * rhs }
}
