use approx::assert_abs_diff_eq;
use mqc_core::lattice::{self, SparseSpinHamiltonian};
use mqc_core::linalg::LanczosOptions;
use mqc_core::lmg::{LmgHamiltonian, SxEigenbasis};
use mqc_core::{tfi, ModelSpec, MqcSpectrum};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

fn pauli_z(state: usize, site: usize) -> f64 {
    if state >> site & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Dense chain Hamiltonian with periodic couplings at distance 1 and 2.
fn dense_chain(n: usize, chi: f64, gamma: f64, fields: &[f64], omega: f64) -> DMatrix<f64> {
    let dim = 1 << n;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let mut d = 0.0;
        for i in 0..n {
            let zi = pauli_z(s, i);
            d -= 0.5 * chi * zi * pauli_z(s, (i + 1) % n);
            d -= 0.5 * gamma * zi * pauli_z(s, (i + 2) % n);
            d -= 0.5 * fields.get(i).copied().unwrap_or(0.0) * zi;
            h[(s ^ (1 << i), s)] -= 0.5 * omega;
        }
        h[(s, s)] = d;
    }
    h
}

/// Distribution of total S_x, indexed by `S_x + N/2` (with the 1/2 spin scale).
fn sx_distribution_dense(sx: &DMatrix<f64>, psi: &DVector<f64>, levels: usize) -> Vec<f64> {
    let eig = SymmetricEigen::new(sx.clone());
    let mut p = vec![0.0; levels];
    let half = (levels - 1) as f64 / 2.0;
    for (k, &val) in eig.eigenvalues.iter().enumerate() {
        let idx = (val + half).round() as usize;
        p[idx] += eig.eigenvectors.column(k).dot(psi).powi(2);
    }
    p
}

fn autocorrelation(p: &[f64], m: i64) -> f64 {
    let n = p.len() as i64;
    (0..n).filter(|k| (0..n).contains(&(k + m))).map(|k| p[k as usize] * p[(k + m) as usize]).sum()
}

fn dense_chain_sx(n: usize) -> DMatrix<f64> {
    let dim = 1 << n;
    let mut sx = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        for i in 0..n {
            sx[(s ^ (1 << i), s)] += 0.5;
        }
    }
    sx
}

fn ground(h: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(h.clone());
    let k = eig.eigenvalues.argmin().0;
    (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned())
}

fn assert_spectrum_matches(s: &MqcSpectrum, p: &[f64], tol: f64) {
    for m in -4..=4 {
        assert_abs_diff_eq!(s.real(m), autocorrelation(p, m), epsilon = tol);
        assert_abs_diff_eq!(s.get(m).im, 0.0, epsilon = tol);
    }
}

#[test]
fn annni_ground_state_matches_dense_diagonalization() {
    let (n, chi, gamma, omega) = (8, 1.0, 0.3, 1.2);
    let h = dense_chain(n, chi, gamma, &[], omega);
    let (e0, psi) = ground(&h);
    let sparse = SparseSpinHamiltonian::new(&ModelSpec::annni(n, chi, omega, gamma)).unwrap();
    let (e, v) = lattice::lanczos_ground_state(&sparse, &LanczosOptions::default()).unwrap();
    assert_abs_diff_eq!(e, e0, epsilon = 1e-10);
    let p = sx_distribution_dense(&dense_chain_sx(n), &psi, n + 1);
    assert_spectrum_matches(&lattice::mqc_spectrum(&v).unwrap(), &p, 1e-9);
}

#[test]
fn random_field_chain_matches_dense_diagonalization() {
    let n = 7;
    let fields = [0.3, -0.8, 0.1, 0.5, -0.2, 0.9, -0.4];
    let h = dense_chain(n, 1.0, 0.0, &fields, 0.9);
    let (e0, psi) = ground(&h);
    let spec = ModelSpec::rfti(n, 1.0, 0.9, 0.5, fields.to_vec());
    let sparse = SparseSpinHamiltonian::new(&spec).unwrap();
    let (e, v) = lattice::lanczos_ground_state(&sparse, &LanczosOptions::default()).unwrap();
    assert_abs_diff_eq!(e, e0, epsilon = 1e-10);
    let p = sx_distribution_dense(&dense_chain_sx(n), &psi, n + 1);
    assert_spectrum_matches(&lattice::mqc_spectrum(&v).unwrap(), &p, 1e-9);
}

#[test]
fn tfi_free_fermion_fotoc_matches_dense_chain() {
    let n = 8;
    for g in [0.4, 1.0, 1.7] {
        let (_, psi) = ground(&dense_chain(n, 1.0, 0.0, &[], g));
        let p = sx_distribution_dense(&dense_chain_sx(n), &psi, n + 1);
        for phi in [0.3, 1.1, 2.5] {
            let re: f64 = p.iter().enumerate().map(|(k, pk)| pk * (phi * k as f64).cos()).sum();
            let im: f64 = p.iter().enumerate().map(|(k, pk)| pk * (phi * k as f64).sin()).sum();
            assert_abs_diff_eq!(tfi::fotoc_product(g, phi, n), re * re + im * im, epsilon = 1e-10);
        }
    }
}

fn dense_lmg(n: usize, chi: f64, omega: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let s = n as f64 / 2.0;
    let mut h = DMatrix::zeros(n + 1, n + 1);
    let mut sx = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        let m = i as f64 - s;
        h[(i, i)] = -chi * m * m / n as f64;
        if i < n {
            let a = 0.5 * (s * (s + 1.0) - m * (m + 1.0)).sqrt();
            for (r, c) in [(i, i + 1), (i + 1, i)] {
                sx[(r, c)] = a;
                h[(r, c)] = -omega * a;
            }
        }
    }
    (h, sx)
}

#[test]
fn lmg_paramagnet_matches_dense_diagonalization() {
    let (n, omega) = (30, 1.6);
    let (h, sx) = dense_lmg(n, 1.0, omega);
    let (e0, psi) = ground(&h);
    let ham = LmgHamiltonian::new(n, 1.0, omega);
    let (e, v) = ham.ground_state().unwrap();
    assert_abs_diff_eq!(e, e0, epsilon = 1e-11);
    let p = sx_distribution_dense(&sx, &psi, n + 1);
    let s = SxEigenbasis::new(n).unwrap().mqc_spectrum(&v).unwrap();
    assert_spectrum_matches(&s, &p, 1e-10);
}

#[test]
fn lmg_even_gap_matches_dense_parity_resolved_levels() {
    let n = 24;
    for omega in [0.5, 1.0, 2.0] {
        let (h, _) = dense_lmg(n, 1.0, omega);
        let eig = SymmetricEigen::new(h);
        // Parity m -> -m reverses the Dicke index.
        let mut even: Vec<f64> = (0..=n)
            .filter(|&k| {
                let v = eig.eigenvectors.column(k);
                (0..=n).map(|i| v[i] * v[n - i]).sum::<f64>() > 0.0
            })
            .map(|k| eig.eigenvalues[k])
            .collect();
        even.sort_by(f64::total_cmp);
        let gap = LmgHamiltonian::new(n, 1.0, omega).even_gap();
        assert_abs_diff_eq!(gap, even[1] - even[0], epsilon = 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lmg_spectrum_is_a_normalized_autocorrelation(n in 2usize..40, omega in 0.05f64..3.0) {
        let (_, v) = LmgHamiltonian::new(n, 1.0, omega).ground_state().unwrap();
        let s = SxEigenbasis::new(n).unwrap().mqc_spectrum(&v).unwrap();
        prop_assert!((s.total().re - 1.0).abs() < 1e-10);
        prop_assert!(s.max_odd() < 1e-10);
        for m in 0..=s.m_max() as i64 {
            prop_assert!((s.real(m) - s.real(-m)).abs() < 1e-12);
            prop_assert!(s.real(m) > -1e-12);
        }
    }

    #[test]
    fn tfi_fotoc_is_bounded_and_even_in_phi(n in 2usize..60, g in 0.05f64..4.0, phi in -3.1f64..3.1) {
        let f = tfi::fotoc_product(g, phi, n);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - tfi::fotoc_product(g, -phi, n)).abs() < 1e-12);
    }
}
