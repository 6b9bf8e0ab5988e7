//! Reference dense eigensolver (Schur decomposition from `nalgebra`).
//!
//! The iterative solvers in this crate never call into this module for their
//! main path; it provides spectra for gap reports, spectral splitting and
//! fallbacks, and serves as the oracle in tests.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, NonnegativeMatrix};

/// All eigenvalues of a real square matrix, sorted by decreasing modulus.
pub fn eigenvalues_real(a: &DMatrix<f64>) -> Vec<Complex64> {
    let mut ev: Vec<Complex64> = a.clone().complex_eigenvalues().iter().copied().collect();
    sort_by_modulus(&mut ev);
    ev
}

/// All eigenvalues of a complex square matrix, sorted by decreasing modulus.
pub fn eigenvalues_complex(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let mut ev: Vec<Complex64> = a
        .clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default();
    sort_by_modulus(&mut ev);
    ev
}

fn sort_by_modulus(ev: &mut [Complex64]) {
    ev.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
}

pub fn spectral_radius_real(a: &DMatrix<f64>) -> f64 {
    eigenvalues_real(a).first().map_or(0.0, |z| z.norm())
}

pub fn spectral_radius(a: &NonnegativeMatrix) -> f64 {
    spectral_radius_real(&a.to_dmatrix())
}

pub fn spectral_radius_complex(b: &ComplexMatrix) -> f64 {
    eigenvalues_complex(&b.to_dmatrix())
        .first()
        .map_or(0.0, |z| z.norm())
}

/// Eigenvector for an approximate eigenvalue `lambda` by inverse iteration,
/// normalized to unit Euclidean norm.
pub fn eigenvector_complex(a: &DMatrix<Complex64>, lambda: Complex64) -> Option<Vec<Complex64>> {
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let shift = lambda + Complex64::new(scale * 1e-11, scale * 1e-11);
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= shift;
    }
    let lu = m.lu();
    let mut x = nalgebra::DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.3));
    for _ in 0..4 {
        let y = lu.solve(&x)?;
        let norm = y.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        x = y / Complex64::new(norm, 0.0);
    }
    Some(x.iter().copied().collect())
}

/// Multiset distance between two equally sized spectra: the largest distance
/// under a greedy nearest matching.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
