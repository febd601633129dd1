//! Thin dense linear-algebra layer over `nalgebra`.

use alloc::vec::Vec;

pub use nalgebra::DMatrix as Matrix;

/// `A·x` with an explicit row-major accumulation order.
pub fn mat_vec(a: &Matrix<f64>, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.ncols(), x.len());
    (0..a.nrows())
        .map(|i| {
            let mut acc = 0.0;
            for (j, xj) in x.iter().enumerate() {
                acc += a[(i, j)] * xj;
            }
            acc
        })
        .collect()
}

/// Solves `A·x = b` by LU with partial pivoting. `None` if `A` is singular.
pub fn solve(a: &Matrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = a.clone().lu().solve(&rhs)?;
    if x.iter().all(|v| v.is_finite()) {
        Some(x.iter().copied().collect())
    } else {
        None
    }
}

/// Maximum absolute column sum.
pub fn norm_one(a: &Matrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| libm::fabs(a[(i, j)])).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute row sum.
pub fn norm_inf(a: &Matrix<f64>) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| libm::fabs(a[(i, j)])).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn norm_frobenius(a: &Matrix<f64>) -> f64 {
    libm::sqrt(a.iter().map(|v| v * v).sum())
}

/// Upper bound on the spectral norm `||A||_2`, hence also on the spectral
/// radius: `min(sqrt(||A||_1 ||A||_inf), ||A||_F)`.
pub fn spectral_norm_bound(a: &Matrix<f64>) -> f64 {
    libm::sqrt(norm_one(a) * norm_inf(a)).min(norm_frobenius(a))
}

/// Spectral norm estimate by power iteration on `AᵀA`. Used in tests to
/// cross-check [`spectral_norm_bound`]; not a certified bound.
pub fn spectral_norm_estimate(a: &Matrix<f64>, iterations: usize) -> f64 {
    let n = a.ncols();
    let ata = a.transpose() * a;
    let mut v = nalgebra::DVector::from_element(n, 1.0 / libm::sqrt(n as f64));
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = &ata * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        v = w / norm;
    }
    libm::sqrt(lambda)
}
