//! Eigen- and exponential solvers for real symmetric operators.

pub mod krylov;
pub mod lanczos;
pub mod tridiag;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

pub use krylov::{expm_apply, KrylovOptions};
pub use lanczos::{lowest_eigenpair, Eigenpair, LanczosOptions};

/// A real symmetric operator applied matrix-free.
pub trait RealSymmetricOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = H x` on real vectors.
    fn apply_real(&self, x: &[f64], y: &mut [f64]);

    /// `y = H x` on complex vectors.
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

/// Symmetric tridiagonal matrix as an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n - 1");
        Self { diag, off }
    }
}

impl RealSymmetricOperator for Tridiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        tridiag::tridiag_matvec(&self.diag, &self.off, x, y);
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.diag.len();
        for i in 0..n {
            let mut acc = x[i] * self.diag[i];
            if i > 0 {
                acc += x[i - 1] * self.off[i - 1];
            }
            if i + 1 < n {
                acc += x[i + 1] * self.off[i];
            }
            y[i] = acc;
        }
    }
}

/// Entries summed serially per block; block partials are then summed in
/// order, so results do not depend on the thread count.
pub(crate) const BLOCK: usize = 1024;

const PAR_BLOCKS: usize = 16;

pub(crate) fn dot_real(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let block = |(x, y): (&[f64], &[f64])| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    if a.len() >= PAR_BLOCKS * BLOCK {
        let partials: Vec<f64> = a.par_chunks(BLOCK).zip(b.par_chunks(BLOCK)).map(block).collect();
        partials.iter().sum()
    } else {
        a.chunks(BLOCK).zip(b.chunks(BLOCK)).map(block).sum()
    }
}

pub(crate) fn norm_real(a: &[f64]) -> f64 {
    dot_real(a, a).sqrt()
}

pub(crate) fn norm_complex(a: &[C64]) -> f64 {
    crate::state::dot(a, a).re.sqrt()
}
