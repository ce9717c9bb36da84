//! Dense complex linear algebra helpers shared by the solvers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `m - m†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor series summed to
/// machine precision.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / re(2f64.powi(squarings));

    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..64 {
        term = &term * &scaled / re(k as f64);
        result += &term;
        if one_norm(&term) <= f64::EPSILON * 1e-2 * one_norm(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `exp(i * t * h)` for Hermitian `h` via its eigendecomposition.
pub fn hermitian_unitary(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        h.nrows(),
        eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, e * t)),
    ));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Spectral norm estimate of a Hermitian matrix by power iteration.
pub fn spectral_norm_estimate(h: &CMatrix, iterations: usize) -> f64 {
    let n = h.nrows();
    if n == 0 {
        return 0.0;
    }
    // Deterministic, non-symmetric start vector so no eigenvector is missed by symmetry.
    let mut v = CVector::from_iterator(n, (0..n).map(|k| c(1.0 + 0.37 * k as f64, 0.11 * k as f64)));
    v /= re(v.norm());
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let w = h * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        estimate = norm;
        v = w / re(norm);
    }
    estimate
}
