//! Lowest eigenpair of a real symmetric operator by Lanczos iteration with
//! full reorthogonalization and explicit restarts.

use rayon::prelude::*;

use super::tridiag;
use super::{dot_real, norm_real, RealSymmetricOperator, BLOCK};
use crate::error::{MqcError, Result};
use crate::tolerance;

/// Bytes of Krylov basis storage a single run may hold.
const BASIS_BYTE_BUDGET: usize = 768 << 20;

/// Below this dimension vector kernels stay sequential.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Target for the true residual `||H v - E v||`.
    pub tol: f64,
    /// Budget of operator applications over all restarts.
    pub max_iter: usize,
    /// Krylov vectors stored per restart cycle.
    pub max_basis: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: tolerance::LANCZOS_RESIDUAL, max_iter: 6000, max_basis: 200 }
    }
}

impl LanczosOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Deterministic start vector with strictly positive entries, so it overlaps
/// any Perron-Frobenius ground state.
pub fn default_start(n: usize) -> Vec<f64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    if y.len() >= PAR_THRESHOLD {
        y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
    } else {
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
    }
}

/// `<v_c, w>` for every `c`, summed per block in a fixed order.
fn multi_dot(vectors: &[&Vec<f64>], w: &[f64]) -> Vec<f64> {
    let k = vectors.len();
    let block = |b: usize| {
        let range = b * BLOCK..((b + 1) * BLOCK).min(w.len());
        let wb = &w[range.clone()];
        vectors.iter().map(|v| v[range.clone()].iter().zip(wb).map(|(x, y)| x * y).sum::<f64>()).collect::<Vec<f64>>()
    };
    let blocks = w.len().div_ceil(BLOCK);
    let partials: Vec<Vec<f64>> = if w.len() >= PAR_THRESHOLD {
        (0..blocks).into_par_iter().map(block).collect()
    } else {
        (0..blocks).map(block).collect()
    };
    let mut out = vec![0.0; k];
    for p in &partials {
        out.iter_mut().zip(p).for_each(|(o, x)| *o += x);
    }
    out
}

/// `w -= sum_c coeffs[c] v_c`, one cache block of `w` at a time.
fn multi_axpy(vectors: &[&Vec<f64>], coeffs: &[f64], w: &mut [f64]) {
    let update = |(b, wb): (usize, &mut [f64])| {
        let start = b * BLOCK;
        let end = start + wb.len();
        for (c, v) in coeffs.iter().zip(vectors) {
            wb.iter_mut().zip(&v[start..end]).for_each(|(x, y)| *x -= c * y);
        }
    };
    if w.len() >= PAR_THRESHOLD {
        w.par_chunks_mut(BLOCK).enumerate().for_each(update);
    } else {
        w.chunks_mut(BLOCK).enumerate().for_each(update);
    }
}

/// Removes the components of `w` along every vector of `sets` by classical
/// Gram-Schmidt, repeated once when the first pass cancels more than 30% of
/// the norm.
fn orthogonalize(w: &mut [f64], sets: &[&[Vec<f64>]]) {
    let vectors: Vec<&Vec<f64>> = sets.iter().flat_map(|s| s.iter()).collect();
    if vectors.is_empty() {
        return;
    }
    let before = norm_real(w);
    for pass in 0..2 {
        let coeffs = multi_dot(&vectors, w);
        multi_axpy(&vectors, &coeffs, w);
        if pass == 0 && norm_real(w) > 0.7 * before {
            break;
        }
    }
}

fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> Result<(f64, Vec<f64>)> {
    match tridiag::lowest_eigenpair(alpha, beta) {
        Ok(pair) => Ok(pair),
        Err(_) => {
            let (vals, vecs) = tridiag::eigh_tridiagonal(alpha, beta)?;
            let n = alpha.len();
            Ok((vals[0], (0..n).map(|k| vecs[k * n]).collect()))
        }
    }
}

/// Lowest eigenpair of `op` restricted to the orthogonal complement of
/// `locked` (which must be orthonormal).
///
/// The returned vector is normalized with its largest entry positive.
pub fn lowest_eigenpair<O: RealSymmetricOperator + ?Sized>(
    op: &O,
    start: Option<&[f64]>,
    locked: &[Vec<f64>],
    opts: &LanczosOptions,
) -> Result<Eigenpair> {
    let n = op.dim();
    if locked.len() >= n {
        return Err(MqcError::InvalidInput("no space left outside the locked vectors".into()));
    }
    let budget_basis = (BASIS_BYTE_BUDGET / (8 * n.max(1))).max(20);
    let max_basis = opts.max_basis.min(budget_basis).min(n - locked.len()).max(1);

    let mut x = match start {
        Some(s) if s.len() == n => s.to_vec(),
        Some(s) => return Err(MqcError::DimensionMismatch { expected: n, got: s.len() }),
        None => default_start(n),
    };
    orthogonalize(&mut x, &[locked]);
    let mut xn = norm_real(&x);
    if xn < 1e-8 {
        x = default_start(n);
        orthogonalize(&mut x, &[locked]);
        xn = norm_real(&x);
    }
    x.iter_mut().for_each(|v| *v /= xn);

    let mut matvecs = 0usize;
    let mut best = f64::INFINITY;
    let mut w = vec![0.0; n];
    loop {
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut ritz: (f64, Vec<f64>);
        loop {
            let j = basis.len() - 1;
            op.apply_real(&basis[j], &mut w);
            matvecs += 1;
            let a = dot_real(&basis[j], &w);
            alpha.push(a);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, &[locked, &basis]);
            let b = norm_real(&w);
            ritz = lowest_ritz(&alpha, &beta)?;
            let estimate = b * ritz.1.last().unwrap().abs();
            let scale = a.abs().max(ritz.0.abs()).max(1.0);
            let invariant = b <= 1e-14 * scale;
            if estimate < 0.1 * opts.tol || invariant || basis.len() == max_basis || matvecs >= opts.max_iter {
                break;
            }
            beta.push(b);
            let mut next = std::mem::take(&mut w);
            next.iter_mut().for_each(|v| *v /= b);
            w = vec![0.0; n];
            basis.push(next);
        }

        let (_, y) = ritz;
        let mut v = vec![0.0; n];
        for (c, bv) in y.iter().zip(&basis) {
            axpy(*c, bv, &mut v);
        }
        orthogonalize(&mut v, &[locked]);
        let vn = norm_real(&v);
        v.iter_mut().for_each(|e| *e /= vn);
        op.apply_real(&v, &mut w);
        matvecs += 1;
        // the residual is measured orthogonal to v, which also refines the
        // Rayleigh quotient
        let mut energy = dot_real(&v, &w);
        axpy(-energy, &v, &mut w);
        let correction = dot_real(&v, &w);
        energy += correction;
        axpy(-correction, &v, &mut w);
        let residual = norm_real(&w);
        best = best.min(residual);
        if residual < opts.tol {
            fix_sign(&mut v);
            return Ok(Eigenpair { value: energy, vector: v, residual, iterations: matvecs });
        }
        if matvecs >= opts.max_iter {
            return Err(MqcError::NoConvergence { what: "Lanczos ground state", residual: best });
        }
        x = v;
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() * (1.0 + 1e-12) {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tridiagonal;

    #[test]
    fn finds_lowest_laplacian_mode() {
        let n = 300;
        let op = Tridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let pair = lowest_eigenpair(&op, None, &[], &LanczosOptions::default()).unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n + 1) as f64).cos();
        assert!((pair.value - exact).abs() < 1e-12);
        assert!(pair.residual < 1e-10);
    }

    #[test]
    fn deflation_yields_second_eigenvalue() {
        let diag: Vec<f64> = (0..60).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let off: Vec<f64> = (0..59).map(|i| 0.5 + 0.2 * (i as f64 * 1.3).cos()).collect();
        let op = Tridiagonal::new(diag.clone(), off.clone());
        let opts = LanczosOptions::with_tol(1e-11);
        let first = lowest_eigenpair(&op, None, &[], &opts).unwrap();
        let second = lowest_eigenpair(&op, None, &[first.vector.clone()], &opts).unwrap();
        assert!((first.value - tridiag::kth_eigenvalue(&diag, &off, 0)).abs() < 1e-10);
        assert!((second.value - tridiag::kth_eigenvalue(&diag, &off, 1)).abs() < 1e-10);
    }

    #[test]
    fn small_basis_restarts_still_converge() {
        let n = 400;
        let op = Tridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let opts = LanczosOptions { max_basis: 40, max_iter: 40_000, ..LanczosOptions::default() };
        let pair = lowest_eigenpair(&op, None, &[], &opts).unwrap();
        assert!(pair.residual < 1e-10);
    }

    #[test]
    fn exhausted_budget_reports_residual() {
        let n = 400;
        let op = Tridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let opts = LanczosOptions { max_basis: 5, max_iter: 10, tol: 1e-12 };
        match lowest_eigenpair(&op, None, &[], &opts) {
            Err(MqcError::NoConvergence { residual, .. }) => assert!(residual.is_finite()),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
