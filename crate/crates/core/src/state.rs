//! Basis conventions and normalized pure states.
//!
//! Two bases are used throughout:
//!
//! * `DickeZ`: the `N + 1` fully symmetric states `|m_z>` with
//!   `m_z = -N/2, ..., N/2` stored in ascending order (index `i` holds
//!   `m_z = i - N/2`).
//! * `Bitstring`: the `2^N` product states of `N` spin-1/2 sites. Bit `i` of
//!   the index is site `i` (site 0 is the least-significant bit); a set bit is
//!   spin up, `sigma^z = +1`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{MqcError, Result};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    DickeZ,
    Bitstring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinBasis {
    kind: BasisKind,
    n_spins: usize,
}

impl SpinBasis {
    pub fn dicke(n_spins: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(MqcError::InvalidInput("basis needs at least one spin".into()));
        }
        Ok(Self { kind: BasisKind::DickeZ, n_spins })
    }

    pub fn bitstring(n_spins: usize) -> Result<Self> {
        if n_spins == 0 || n_spins >= usize::BITS as usize - 1 {
            return Err(MqcError::InvalidInput(format!(
                "bitstring basis cannot hold {n_spins} spins"
            )));
        }
        Ok(Self { kind: BasisKind::Bitstring, n_spins })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            BasisKind::DickeZ => self.n_spins + 1,
            BasisKind::Bitstring => 1usize << self.n_spins,
        }
    }

    /// `S_z` eigenvalue of basis state `index`.
    pub fn sz(&self, index: usize) -> f64 {
        let half = self.n_spins as f64 / 2.0;
        match self.kind {
            BasisKind::DickeZ => index as f64 - half,
            BasisKind::Bitstring => index.count_ones() as f64 - half,
        }
    }
}

impl fmt::Display for SpinBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BasisKind::DickeZ => write!(f, "DickeZ(N={})", self.n_spins),
            BasisKind::Bitstring => write!(f, "Bitstring(N={})", self.n_spins),
        }
    }
}

/// A normalized pure state on a [`SpinBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: SpinBasis,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Normalizes `amplitudes` and wraps them. Fails on a length mismatch or
    /// a vanishing vector.
    pub fn new(basis: SpinBasis, mut amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(MqcError::DimensionMismatch {
                expected: basis.dimension(),
                got: amplitudes.len(),
            });
        }
        let norm = norm(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(MqcError::InvalidInput(format!("cannot normalize state with norm {norm}")));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { basis, amplitudes })
    }

    pub fn from_real(basis: SpinBasis, amplitudes: &[f64]) -> Result<Self> {
        Self::new(basis, amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn basis_state(basis: SpinBasis, index: usize) -> Result<Self> {
        let dim = basis.dimension();
        if index >= dim {
            return Err(MqcError::InvalidInput(format!("basis index {index} out of range {dim}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < tolerance::STATE_NORM
    }

    /// Multiplies by a global phase so the largest-magnitude amplitude is
    /// real and positive. Ties go to the lowest index.
    pub fn with_fixed_phase(mut self) -> Self {
        let mut best = 0usize;
        let mut best_mag = -1.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let mag = a.norm_sqr();
            // relative slack so roundoff does not flip ties between symmetric amplitudes
            if mag > best_mag * (1.0 + 1e-12) {
                best = i;
                best_mag = mag;
            }
        }
        let a = self.amplitudes[best];
        if a.norm() > 0.0 {
            let phase = a.conj() / a.norm();
            self.amplitudes.iter_mut().for_each(|x| *x *= phase);
        }
        self
    }

    /// Largest absolute imaginary part over all amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.im.abs()).fold(0.0, f64::max)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_same_basis(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.basis != b.basis {
        return Err(MqcError::BasisMismatch {
            left: a.basis.to_string(),
            right: b.basis.to_string(),
        });
    }
    Ok(())
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    check_same_basis(a, b)?;
    Ok(dot(&a.amplitudes, &b.amplitudes))
}

/// `|<a|b>|^2`.
pub fn overlap_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr().min(1.0))
}

/// Raw `sum_i conj(a_i) b_i` on amplitude slices of equal length.
///
/// Summed in fixed blocks, so the result is independent of the thread count.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    use rayon::prelude::*;
    const BLOCK: usize = 1024;
    debug_assert_eq!(a.len(), b.len());
    let block = |(x, y): (&[C64], &[C64])| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<C64>();
    if a.len() >= 16 * BLOCK {
        let partials: Vec<C64> = a.par_chunks(BLOCK).zip(b.par_chunks(BLOCK)).map(block).collect();
        partials.iter().sum()
    } else {
        a.chunks(BLOCK).zip(b.chunks(BLOCK)).map(block).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn plus(basis: SpinBasis) -> StateVector {
        let mut amps = vec![C64::new(0.0, 0.0); basis.dimension()];
        amps[0] = C64::new(1.0, 0.0);
        amps[1] = C64::new(1.0, 0.0);
        StateVector::new(basis, amps).unwrap()
    }

    #[test]
    fn dimensions_follow_basis_kind() {
        assert_eq!(SpinBasis::dicke(7).unwrap().dimension(), 8);
        assert_eq!(SpinBasis::bitstring(7).unwrap().dimension(), 128);
    }

    #[test]
    fn dicke_labels_ascend_from_minus_half_n() {
        let b = SpinBasis::dicke(4).unwrap();
        let labels: Vec<f64> = (0..b.dimension()).map(|i| b.sz(i)).collect();
        assert_eq!(labels, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn bitstring_site_zero_is_lsb() {
        let b = SpinBasis::bitstring(3).unwrap();
        // index 1 = site 0 up, the rest down
        assert_eq!(b.sz(1), -0.5);
        assert_eq!(b.sz(0b111), 1.5);
    }

    #[test]
    fn inner_products_of_basis_states() {
        let b = SpinBasis::bitstring(2).unwrap();
        let e0 = StateVector::basis_state(b, 0).unwrap();
        let e1 = StateVector::basis_state(b, 1).unwrap();
        let p = plus(b);
        assert_abs_diff_eq!(inner_product(&p, &p).unwrap().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inner_product(&e0, &e1).unwrap().norm(), 0.0);
        let proj = inner_product(&p, &e0).unwrap();
        assert_abs_diff_eq!(proj.re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(proj.im, 0.0);
    }

    #[test]
    fn overlap_fidelity_examples() {
        let b = SpinBasis::dicke(3).unwrap();
        let e0 = StateVector::basis_state(b, 0).unwrap();
        let e1 = StateVector::basis_state(b, 1).unwrap();
        assert_abs_diff_eq!(overlap_fidelity(&e0, &e0).unwrap(), 1.0);
        assert_abs_diff_eq!(overlap_fidelity(&e0, &e1).unwrap(), 0.0);
        assert_abs_diff_eq!(overlap_fidelity(&plus(b), &e0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = StateVector::basis_state(SpinBasis::dicke(3).unwrap(), 0).unwrap();
        let b = StateVector::basis_state(SpinBasis::bitstring(2).unwrap(), 0).unwrap();
        assert!(matches!(inner_product(&a, &b), Err(MqcError::BasisMismatch { .. })));
        assert!(overlap_fidelity(&a, &b).is_err());
    }

    #[test]
    fn construction_normalizes_and_rejects_zero() {
        let b = SpinBasis::dicke(1).unwrap();
        let s = StateVector::from_real(b, &[3.0, 4.0]).unwrap();
        assert!(s.is_normalized());
        assert!(StateVector::from_real(b, &[0.0, 0.0]).is_err());
        assert!(StateVector::from_real(b, &[1.0]).is_err());
    }

    #[test]
    fn phase_fixing_makes_largest_amplitude_real_positive() {
        let b = SpinBasis::dicke(2).unwrap();
        let s = StateVector::new(
            b,
            vec![C64::new(0.0, 0.1), C64::new(0.0, -2.0), C64::new(0.3, 0.0)],
        )
        .unwrap()
        .with_fixed_phase();
        let a = s.amplitudes()[1];
        assert!(a.re > 0.0);
        assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);
    }
}
