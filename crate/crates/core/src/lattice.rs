//! Matrix-free exact diagonalization of periodic spin-1/2 chains (TFI, ANNNI,
//! RFTI) on the `2^N` bitstring basis.
//!
//! `H = -(chi/2) sum z_i z_{i+1} - (gamma/2) sum z_i z_{i+2}
//!      - (1/2) sum delta_i z_i - (Omega/2) sum x_i`.
//!
//! Without longitudinal fields `H` commutes with the spin-flip parity
//! `P = prod_i x_i`. The even sector is stored on representatives `b` with the
//! top bit clear, `y_b = sqrt(2) x_b`; the partner `b ^ full` carries the
//! same amplitude.

use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{scan_from_triples, DerivativeScan};
use crate::error::{MqcError, Result};
use crate::linalg::{lowest_eigenpair, LanczosOptions, RealSymmetricOperator};
use crate::lmg::autocorrelation_spectrum;
use crate::model::ModelSpec;
use crate::spectrum::{MqcSpectrum, SpectrumKind};
use crate::state::{dot, BasisKind, SpinBasis, StateVector};

const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// All `2^N` bitstrings.
    Full,
    /// Spin-flip-even states on `2^(N-1)` representatives.
    EvenParity,
}

#[derive(Debug, Clone)]
pub struct SparseSpinHamiltonian {
    spec: ModelSpec,
    /// `sum` of all `z z` and longitudinal-field terms per bitstring.
    diagonal: Vec<f64>,
    /// `Omega`; each single-bit flip enters with `-Omega/2`.
    transverse_amplitude: f64,
    parity_symmetric: bool,
}

fn spin(b: usize, i: usize) -> f64 {
    if b >> i & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

impl SparseSpinHamiltonian {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        Self::with_cap(spec, crate::tolerance::DEFAULT_BITSTRING_CAP)
    }

    pub fn with_cap(spec: &ModelSpec, cap: usize) -> Result<Self> {
        if !spec.model.is_lattice() {
            return Err(MqcError::InvalidModel(format!("{:?} is not a lattice model", spec.model)));
        }
        spec.validate_with_cap(cap)?;
        let n = spec.n_spins;
        let chi = spec.chi;
        let gamma = spec.effective_gamma();
        let fields: Vec<f64> = spec.effective_fields().map(|f| f.to_vec()).unwrap_or_else(|| vec![0.0; n]);
        let diagonal = (0..1usize << n)
            .into_par_iter()
            .map(|b| {
                let mut e = 0.0;
                for i in 0..n {
                    let zi = spin(b, i);
                    e -= 0.5 * chi * zi * spin(b, (i + 1) % n);
                    if gamma != 0.0 {
                        e -= 0.5 * gamma * zi * spin(b, (i + 2) % n);
                    }
                    e -= 0.5 * fields[i] * zi;
                }
                e
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            diagonal,
            transverse_amplitude: spec.omega,
            parity_symmetric: fields.iter().all(|f| *f == 0.0),
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn n_spins(&self) -> usize {
        self.spec.n_spins
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn transverse_amplitude(&self) -> f64 {
        self.transverse_amplitude
    }

    /// Same couplings at a different transverse field; the diagonal is shared.
    pub fn with_omega(&self, omega: f64) -> Self {
        Self { spec: self.spec.with_omega(omega), transverse_amplitude: omega, ..self.clone() }
    }

    pub fn basis(&self) -> SpinBasis {
        SpinBasis::bitstring(self.spec.n_spins).expect("validated at construction")
    }

    /// Even parity when `H` commutes with the global spin flip, else full.
    pub fn natural_sector(&self) -> Sector {
        if self.parity_symmetric {
            Sector::EvenParity
        } else {
            Sector::Full
        }
    }

    pub fn operator(&self, sector: Sector) -> Result<SectorOperator<'_>> {
        if sector == Sector::EvenParity && !self.parity_symmetric {
            return Err(MqcError::InvalidModel("longitudinal fields break spin-flip parity".into()));
        }
        let n = self.spec.n_spins;
        let dim = match sector {
            Sector::Full => 1 << n,
            Sector::EvenParity => 1 << (n - 1),
        };
        Ok(SectorOperator { diag: &self.diagonal[..dim], half_omega: 0.5 * self.transverse_amplitude, n, sector })
    }

    /// The sector operator at another transverse field, sharing the diagonal.
    pub fn operator_at(&self, sector: Sector, omega: f64) -> Result<SectorOperator<'_>> {
        let mut op = self.operator(sector)?;
        op.half_omega = 0.5 * omega;
        Ok(op)
    }
}

/// `H` restricted to one sector, applied by single-bit-flip gathers.
#[derive(Debug, Clone, Copy)]
pub struct SectorOperator<'a> {
    diag: &'a [f64],
    half_omega: f64,
    n: usize,
    sector: Sector,
}

impl SectorOperator<'_> {
    pub fn sector(&self) -> Sector {
        self.sector
    }

    fn apply_generic<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + Send + Sync + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let (bits, extra) = match self.sector {
            Sector::Full => (self.n, None),
            Sector::EvenParity => (self.n - 1, Some((1usize << (self.n - 1)) - 1)),
        };
        let diag = self.diag;
        let w = -self.half_omega;
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
            for (o, yb) in out.iter_mut().enumerate() {
                let b = c * CHUNK + o;
                let mut flips = T::default();
                for i in 0..bits {
                    flips = flips + x[b ^ (1 << i)];
                }
                if let Some(low) = extra {
                    flips = flips + x[b ^ low];
                }
                *yb = x[b] * diag[b] + flips * w;
            }
        });
    }
}

impl RealSymmetricOperator for SectorOperator<'_> {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        self.apply_generic(x, y);
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.apply_generic(x, y);
    }
}

/// `H v` in the full bitstring space (not normalized).
pub fn apply_hamiltonian(h: &SparseSpinHamiltonian, v: &StateVector) -> Result<Vec<C64>> {
    let basis = h.basis();
    if v.basis() != basis {
        return Err(MqcError::BasisMismatch { left: basis.to_string(), right: v.basis().to_string() });
    }
    let op = h.operator(Sector::Full)?;
    let mut out = vec![C64::new(0.0, 0.0); op.dim()];
    op.apply(v.amplitudes(), &mut out);
    Ok(out)
}

/// Full-space amplitudes of an even-sector vector.
pub fn expand_even<T: Copy + Mul<f64, Output = T>>(n_spins: usize, reduced: &[T]) -> Vec<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let half = 1usize << (n_spins - 1);
    debug_assert_eq!(reduced.len(), half);
    let mut out = Vec::with_capacity(2 * half);
    out.extend(reduced.iter().map(|v| *v * s));
    out.extend(reduced.iter().rev().map(|v| *v * s));
    out
}

/// Even-sector representation of a full-space vector, `sqrt(2) x_b` for `b < 2^(N-1)`.
/// The odd-parity component is discarded.
pub fn restrict_even(n_spins: usize, full: &[C64]) -> Vec<C64> {
    let half = 1usize << (n_spins - 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..half).map(|b| (full[b] + full[2 * half - 1 - b]) * s).collect()
}

/// A sector eigenvector together with its energy and diagnostics.
#[derive(Debug, Clone)]
pub struct SectorEigenpair {
    pub energy: f64,
    pub sector: Sector,
    /// Amplitudes in the sector's own basis.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl SectorEigenpair {
    /// Full-space amplitudes.
    pub fn full_amplitudes(&self, n_spins: usize) -> Vec<f64> {
        match self.sector {
            Sector::Full => self.vector.clone(),
            Sector::EvenParity => expand_even(n_spins, &self.vector),
        }
    }

    pub fn state(&self, n_spins: usize) -> Result<StateVector> {
        StateVector::from_real(SpinBasis::bitstring(n_spins)?, &self.full_amplitudes(n_spins))
    }
}

/// Lowest eigenpair in the given sector, optionally warm-started.
pub fn sector_ground_state(
    h: &SparseSpinHamiltonian,
    sector: Sector,
    start: Option<&[f64]>,
    opts: &LanczosOptions,
) -> Result<SectorEigenpair> {
    let op = h.operator(sector)?;
    let pair = lowest_eigenpair(&op, start, &[], opts)?;
    Ok(SectorEigenpair {
        energy: pair.value,
        sector,
        vector: pair.vector,
        residual: pair.residual,
        iterations: pair.iterations,
    })
}

/// Ground state by Lanczos with full reorthogonalization, in the even-parity
/// sector when `H` has the spin-flip symmetry. The phase is fixed so the
/// largest amplitude is real positive.
pub fn lanczos_ground_state(h: &SparseSpinHamiltonian, opts: &LanczosOptions) -> Result<(f64, StateVector)> {
    let pair = sector_ground_state(h, h.natural_sector(), None, opts)?;
    Ok((pair.energy, pair.state(h.n_spins())?.with_fixed_phase()))
}

/// The two lowest eigenvalues in the full space, by deflated Lanczos.
pub fn lowest_two_eigenvalues(h: &SparseSpinHamiltonian, opts: &LanczosOptions) -> Result<(f64, f64)> {
    let op = h.operator(Sector::Full)?;
    let first = lowest_eigenpair(&op, None, &[], opts)?;
    let second = lowest_eigenpair(&op, None, std::slice::from_ref(&first.vector), opts)?;
    Ok((first.value, second.value))
}

fn check_bitstring(v: &StateVector) -> Result<usize> {
    let b = v.basis();
    if b.kind() != BasisKind::Bitstring {
        return Err(MqcError::BasisMismatch { left: "bitstring".into(), right: b.to_string() });
    }
    Ok(b.n_spins())
}

/// Applies `f` to every pair `(x_b, x_{b | bit})` with the bit clear in `b`.
fn for_each_pair<T: Send>(v: &mut [T], bit: usize, f: impl Fn(&mut T, &mut T) + Sync) {
    let h = 1usize << bit;
    if v.len() / (2 * h) >= 64 {
        v.par_chunks_mut(2 * h).for_each(|c| {
            let (a, b) = c.split_at_mut(h);
            a.iter_mut().zip(b).for_each(|(x, y)| f(x, y));
        });
    } else {
        for c in v.chunks_mut(2 * h) {
            let (a, b) = c.split_at_mut(h);
            a.par_iter_mut().zip(b.par_iter_mut()).for_each(|(x, y)| f(x, y));
        }
    }
}

/// `exp(-i phi S_x)` on full-space amplitudes, one site at a time.
pub fn rotate_amplitudes(amps: &mut [C64], n_spins: usize, phi: f64) {
    let (s, c) = (0.5 * phi).sin_cos();
    let mis = C64::new(0.0, -s);
    for i in 0..n_spins {
        for_each_pair(amps, i, |x, y| {
            let (a, b) = (*x, *y);
            *x = a * c + b * mis;
            *y = b * c + a * mis;
        });
    }
}

/// `exp(-i phi S_x) |v>`, exactly unitary.
pub fn apply_global_x_rotation(v: &StateVector, phi: f64) -> Result<StateVector> {
    let n = check_bitstring(v)?;
    let mut amps = v.amplitudes().to_vec();
    rotate_amplitudes(&mut amps, n, phi);
    StateVector::new(v.basis(), amps)
}

/// `|<v| exp(-i phi S_x) |v>|^2`.
pub fn fotoc_of_state(v: &StateVector, phi: f64) -> Result<f64> {
    let n = check_bitstring(v)?;
    let mut amps = v.amplitudes().to_vec();
    rotate_amplitudes(&mut amps, n, phi);
    Ok(dot(v.amplitudes(), &amps).norm_sqr())
}

/// In-place unnormalized Walsh-Hadamard transform.
fn walsh_hadamard<T>(v: &mut [T], n_spins: usize)
where
    T: Copy + Send + Add<Output = T> + std::ops::Sub<Output = T>,
{
    for i in 0..n_spins {
        for_each_pair(v, i, |x, y| {
            let (a, b) = (*x, *y);
            *x = a + b;
            *y = a - b;
        });
    }
}

/// Amplitudes in the product `x` basis. Bit `i` of the index set means site
/// `i` points along `-x`, so the `S_x` eigenvalue is `N/2 - popcount`.
pub fn x_basis_amplitudes(amps: &[C64], n_spins: usize) -> Vec<C64> {
    let mut c = amps.to_vec();
    walsh_hadamard(&mut c, n_spins);
    let scale = (0.5f64).powf(n_spins as f64 / 2.0);
    c.iter_mut().for_each(|x| *x *= scale);
    c
}

/// Sums `w(s)` into bins of `S_x` eigenvalue, ascending (`j = N - popcount(s)`).
fn bin_by_sx<T: Copy + Default + Add<Output = T>>(n_spins: usize, values: impl Iterator<Item = T>) -> Vec<T> {
    let mut p = vec![T::default(); n_spins + 1];
    for (s, w) in values.enumerate() {
        let j = n_spins - s.count_ones() as usize;
        p[j] = p[j] + w;
    }
    p
}

/// `S_x` distribution of real full-space amplitudes, ascending in `m_x`.
pub fn sx_distribution_real(amps: &[f64], n_spins: usize) -> Vec<f64> {
    let mut c = amps.to_vec();
    walsh_hadamard(&mut c, n_spins);
    let scale = 0.5f64.powi(n_spins as i32);
    let mut p = bin_by_sx(n_spins, c.iter().map(|x| x * x * scale));
    p.iter_mut().for_each(|x| *x = x.max(0.0));
    p
}

/// `S_x` distribution of a state, ascending in `m_x`.
pub fn sx_distribution(v: &StateVector) -> Result<Vec<f64>> {
    let n = check_bitstring(v)?;
    let c = x_basis_amplitudes(v.amplitudes(), n);
    Ok(bin_by_sx(n, c.iter().map(|x| x.norm_sqr())))
}

/// `q_k = sum_{m_x(s) = k} conj(<s|a>) <s|b>`, ascending in `m_x`.
pub fn sx_cross_distribution(a: &StateVector, b: &StateVector) -> Result<Vec<C64>> {
    let n = check_bitstring(a)?;
    if a.basis() != b.basis() {
        return Err(MqcError::BasisMismatch { left: a.basis().to_string(), right: b.basis().to_string() });
    }
    Ok(sx_cross_amplitudes(a.amplitudes(), b.amplitudes(), n))
}

/// [`sx_cross_distribution`] on raw full-space amplitudes.
pub fn sx_cross_amplitudes(a: &[C64], b: &[C64], n_spins: usize) -> Vec<C64> {
    let ca = x_basis_amplitudes(a, n_spins);
    let cb = x_basis_amplitudes(b, n_spins);
    bin_by_sx(n_spins, ca.iter().zip(&cb).map(|(x, y)| x.conj() * y))
}

/// True MQC spectrum of a pure state from its `S_x` distribution.
pub fn mqc_spectrum(v: &StateVector) -> Result<MqcSpectrum> {
    Ok(autocorrelation_spectrum(&sx_distribution(v)?, SpectrumKind::TrueEcho))
}

/// `I_m` of a sector eigenvector, e.g. along a scan.
pub fn sector_intensities(pair: &SectorEigenpair, n_spins: usize) -> MqcSpectrum {
    let p = sx_distribution_real(&pair.full_amplitudes(n_spins), n_spins);
    autocorrelation_spectrum(&p, SpectrumKind::TrueEcho)
}

/// Second-derivative scans of ground-state intensities `I_m`, one per entry
/// of `orders`, over the transverse field.
///
/// Each grid point is solved at `x`, `x - d` and `x + d` in the model's natural
/// sector; every solve warm-starts from the previous grid point.
pub fn intensity_derivative_scan(
    h: &SparseSpinHamiltonian,
    grid: &[f64],
    fd_step: f64,
    orders: &[i64],
    opts: &LanczosOptions,
) -> Result<Vec<DerivativeScan>> {
    if !(fd_step > 0.0) {
        return Err(MqcError::InvalidGrid(format!("fd_step must be positive, got {fd_step}")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(MqcError::InvalidGrid("scan grid must be strictly ascending".into()));
    }
    let n = h.n_spins();
    let sector = h.natural_sector();
    let mut start: Option<Vec<f64>> = None;
    let mut triples = vec![Vec::with_capacity(grid.len()); orders.len()];
    for &x in grid {
        let at = |w: f64, start: Option<&[f64]>| -> Result<(Vec<f64>, Vec<f64>)> {
            let pair = lowest_eigenpair(&h.operator_at(sector, w)?, start, &[], opts)?;
            let full = match sector {
                Sector::Full => pair.vector.clone(),
                Sector::EvenParity => expand_even(n, &pair.vector),
            };
            let s = autocorrelation_spectrum(&sx_distribution_real(&full, n), SpectrumKind::TrueEcho);
            Ok((orders.iter().map(|&m| s.real(m)).collect(), pair.vector))
        };
        let (mid, v) = at(x, start.as_deref())?;
        let (lo, _) = at(x - fd_step, Some(&v))?;
        let (hi, _) = at(x + fd_step, Some(&v))?;
        start = Some(v);
        for (k, t) in triples.iter_mut().enumerate() {
            t.push((lo[k], mid[k], hi[k]));
        }
    }
    Ok(triples.iter().map(|t| scan_from_triples(grid, t, fd_step)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameter {
    /// `<|S_z|>`.
    pub raw: f64,
    /// `2 <|S_z|> / N`.
    pub normalized: f64,
}

/// `<|S_z|>` with `S_z(b) = popcount(b) - N/2`.
pub fn order_parameter_abs_sz(v: &StateVector) -> Result<OrderParameter> {
    let n = check_bitstring(v)?;
    let half = n as f64 / 2.0;
    let raw = v
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * (b.count_ones() as f64 - half).abs())
        .sum::<f64>();
    Ok(OrderParameter { raw, normalized: raw / half })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub seed: u64,
    pub sigma: f64,
    pub fields: Vec<f64>,
}

impl DisorderRealization {
    /// RFTI model with these fields.
    pub fn model(&self, chi: f64, omega: f64) -> ModelSpec {
        ModelSpec::rfti(self.fields.len(), chi, omega, self.sigma, self.fields.clone())
    }
}

/// I.i.d. `N(0, sigma^2)` fields from `ChaCha8Rng::seed_from_u64(seed)`, unclipped.
pub fn draw_disorder(seed: u64, sigma: f64, n_spins: usize) -> Result<DisorderRealization> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(MqcError::InvalidModel(format!("disorder sigma must be finite and >= 0, got {sigma}")));
    }
    let fields = if sigma == 0.0 {
        vec![0.0; n_spins]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, sigma).map_err(|e| MqcError::InvalidModel(e.to_string()))?;
        (0..n_spins).map(|_| normal.sample(&mut rng)).collect()
    };
    Ok(DisorderRealization { seed, sigma, fields })
}
