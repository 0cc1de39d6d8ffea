//! `exp(-i t H) v` for real symmetric `H` by Lanczos projection with
//! adaptive sub-stepping.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::tridiag::eigh_tridiagonal;
use super::{norm_complex, RealSymmetricOperator};
use crate::error::{MqcError, Result};
use crate::state::dot;
use crate::tolerance;

const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Maximum Krylov subspace dimension.
    pub dim: usize,
    /// Local error target of each sub-step.
    pub tol: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self { dim: 20, tol: tolerance::KRYLOV_LOCAL_ERROR }
    }
}

fn caxpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    if y.len() >= PAR_THRESHOLD {
        y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
    } else {
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
    }
}

/// `exp(-i h T) e_1` from the eigendecomposition `T = Z diag(lambda) Z^T`.
fn small_expm_e1(values: &[f64], vectors: &[f64], h: f64) -> Vec<C64> {
    let k = values.len();
    let mut out = vec![C64::new(0.0, 0.0); k];
    for (j, &lam) in values.iter().enumerate() {
        let coeff = C64::from_polar(vectors[j], -h * lam); // Z[0][j] e^{-i h lambda_j}
        for (r, o) in out.iter_mut().enumerate() {
            *o += coeff * vectors[r * k + j];
        }
    }
    out
}

/// Overwrites `v` with `exp(-i t H) v`. Returns the number of sub-steps.
///
/// Each sub-step's a-posteriori error `beta_k |[exp(-i h T_k) e_1]_k| ||v||`
/// is kept below `opts.tol`; the sub-step is halved until it is.
pub fn expm_apply<O: RealSymmetricOperator + ?Sized>(
    op: &O,
    v: &mut [C64],
    t: f64,
    opts: &KrylovOptions,
) -> Result<usize> {
    let n = op.dim();
    if v.len() != n {
        return Err(MqcError::DimensionMismatch { expected: n, got: v.len() });
    }
    if t == 0.0 {
        return Ok(0);
    }
    let total = t.abs();
    let sign = t.signum();
    let mut remaining = total;
    let mut substeps = 0;
    let mut w = vec![C64::new(0.0, 0.0); n];
    while remaining > 0.0 {
        let beta0 = norm_complex(v);
        if beta0 == 0.0 {
            return Ok(substeps);
        }
        let mut basis: Vec<Vec<C64>> = vec![v.iter().map(|x| x / beta0).collect()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let max_dim = opts.dim.min(n).max(1);
        // (eigenvalues, eigenvectors, trailing beta) of the current projection
        let mut proj: (Vec<f64>, Vec<f64>, f64);
        loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            caxpy(C64::new(-a, 0.0), &basis[j], &mut w);
            if j > 0 {
                caxpy(C64::new(-beta[j - 1], 0.0), &basis[j - 1], &mut w);
            }
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    caxpy(-c, b, &mut w);
                }
            }
            let b = norm_complex(&w);
            let (vals, vecs) = eigh_tridiagonal(&alpha, &beta)?;
            let scale = alpha.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            let breakdown = b <= 1e-13 * scale;
            proj = (vals, vecs, if breakdown { 0.0 } else { b });
            let k = alpha.len();
            let y = small_expm_e1(&proj.0, &proj.1, sign * remaining);
            let err = proj.2 * y[k - 1].norm() * beta0;
            if breakdown || err <= opts.tol || k == max_dim {
                break;
            }
            beta.push(b);
            let next: Vec<C64> = w.iter().map(|x| x / b).collect();
            basis.push(next);
        }

        let k = alpha.len();
        let mut h = remaining;
        let y = loop {
            let y = small_expm_e1(&proj.0, &proj.1, sign * h);
            let err = proj.2 * y[k - 1].norm() * beta0;
            if err <= opts.tol {
                break y;
            }
            h *= 0.5;
            if h < 1e-14 * total {
                return Err(MqcError::NoConvergence { what: "Krylov exponential", residual: err });
            }
        };
        v.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        for (c, b) in y.iter().zip(&basis) {
            caxpy(c * beta0, b, v);
        }
        remaining = if h >= remaining { 0.0 } else { remaining - h };
        substeps += 1;
    }
    Ok(substeps)
}
