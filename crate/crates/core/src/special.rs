//! Special functions: Gauss hypergeometric series, harmonic numbers and
//! binomial coefficients.

use crate::error::{MqcError, Result};

const HYP_REL_TOL: f64 = 1e-15;
const HYP_MAX_TERMS: usize = 1_000_000;
const HYP_ARG_LIMIT: f64 = 1.0 - 1e-8;

/// `2F1(a, b; c; x)` by direct power series, for `|x| < 1 - 1e-8`.
///
/// Summation stops once a term, inflated by the geometric tail bound
/// `1 / (1 - |x|)`, falls below `1e-15` times the partial sum.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() >= HYP_ARG_LIMIT {
        return Err(MqcError::Domain(format!(
            "2F1 series needs |x| < 1 - 1e-8, got x = {x}"
        )));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(MqcError::Domain(format!("2F1 undefined for c = {c}")));
    }
    let tail = 1.0 / (1.0 - x.abs());
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..HYP_MAX_TERMS {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() * tail < HYP_REL_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(MqcError::NoConvergence { what: "2F1 power series", residual: (term / sum).abs() })
}

/// Harmonic number `H_x` for integer `x >= 0` and half-integer `x >= -1/2`,
/// continued through `H_x = psi(x + 1) + gamma_E`.
pub fn harmonic_number(x: f64) -> Result<f64> {
    let twice = 2.0 * x;
    if twice.fract() != 0.0 || x < -0.5 {
        return Err(MqcError::Domain(format!("harmonic number H_{x} not supported")));
    }
    if x.fract() == 0.0 {
        return Ok((1..=x as u64).map(|k| 1.0 / k as f64).sum());
    }
    // H_{l - 1/2} = -2 ln 2 + 2 sum_{k=1}^{l} 1/(2k - 1)
    let l = (x + 0.5) as u64;
    let odd: f64 = (1..=l).map(|k| 1.0 / (2 * k - 1) as f64).sum();
    Ok(-2.0 * std::f64::consts::LN_2 + 2.0 * odd)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// `C(n, k)` as a float, exact while it fits in 53 bits.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0f64;
    for i in 1..=k {
        c = c * (n - k + i) as f64 / i as f64;
    }
    c
}

/// `C(n, k) / 4^q`, evaluated in log space when the direct value would overflow.
pub fn binomial_over_four_pow(n: u64, k: u64, q: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 60 {
        return binomial(n, k) / 4f64.powi(q as i32);
    }
    (ln_binomial(n, k) - q as f64 * 4f64.ln()).exp()
}
