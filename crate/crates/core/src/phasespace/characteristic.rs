use num_complex::Complex64 as C64;

use crate::error::{mismatch, Result};
use crate::fockspace::{superop_weyl_apply, FockBasis};
use crate::linalg::{expm, trace, CMatrix};

/// One value `χ(λ)` of a characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSample {
    pub lambda: C64,
    pub value: C64,
}

fn field_basis(rho: &CMatrix) -> Result<FockBasis> {
    if !rho.is_square() {
        return Err(mismatch("square field operator", format!("{:?}", rho.shape())));
    }
    FockBasis::new(rho.nrows().saturating_sub(1))
}

/// `tr(exp(λ a† - λ* a) ρ)`, with the exponential taken on the truncated space
/// of `rho`. Accurate while the displaced support of `rho` stays below the
/// truncation edge.
pub fn characteristic_function(rho_field: &CMatrix, lambda: C64) -> Result<CharacteristicSample> {
    let basis = field_basis(rho_field)?;
    let generator = basis.creation() * lambda - basis.annihilation() * lambda.conj();
    let value = trace(&(expm(&generator) * rho_field));
    Ok(CharacteristicSample { lambda, value })
}

/// `tr(exp(-λ* a_c + λ a_c†) ρ)`, built from the superoperator product form.
pub fn superop_characteristic_function(rho: &CMatrix, lambda: C64, basis: FockBasis) -> Result<CharacteristicSample> {
    let value = trace(&superop_weyl_apply(lambda, rho, basis)?);
    Ok(CharacteristicSample { lambda, value })
}

/// Untruncated displacement matrix elements `<m| D(λ) |n>` for `m, n < dim`.
///
/// For `m >= n`: `sqrt(n!/m!) λ^{m-n} e^{-|λ|²/2} L_n^{(m-n)}(|λ|²)`; the upper
/// triangle uses `(-λ*)` in place of `λ`.
pub fn displacement_elements(lambda: C64, dim: usize) -> CMatrix {
    let x = lambda.norm_sqr();
    let mut out = CMatrix::zeros(dim, dim);
    // e^{-x/2} underflows long before the polynomial factors can overflow.
    if x > 1400.0 {
        return out;
    }
    let envelope = (-0.5 * x).exp();
    let minus_conj = -lambda.conj();
    let mut inv_sqrt_kfact = 1.0;
    let mut lambda_pow = C64::new(1.0, 0.0);
    let mut conj_pow = C64::new(1.0, 0.0);
    for k in 0..dim {
        if k > 0 {
            inv_sqrt_kfact /= (k as f64).sqrt();
            lambda_pow *= lambda;
            conj_pow *= minus_conj;
        }
        let kf = k as f64;
        let mut lag_prev = 0.0;
        let mut lag = 1.0;
        let mut ratio = inv_sqrt_kfact;
        for n in 0..(dim - k) {
            if n == 1 {
                lag_prev = lag;
                lag = 1.0 + kf - x;
            } else if n > 1 {
                let j = (n - 1) as f64;
                let next = ((2.0 * j + 1.0 + kf - x) * lag - (j + kf) * lag_prev) / (j + 1.0);
                lag_prev = lag;
                lag = next;
            }
            if n > 0 {
                ratio *= (n as f64 / (n + k) as f64).sqrt();
            }
            let scale = ratio * envelope * lag;
            out[(n + k, n)] = lambda_pow * scale;
            if k > 0 {
                out[(n, n + k)] = conj_pow * scale;
            }
        }
    }
    out
}

/// `tr(D(λ) ρ)` with untruncated displacement elements.
pub fn exact_characteristic(rho_field: &CMatrix, lambda: C64) -> C64 {
    let d = displacement_elements(lambda, rho_field.nrows());
    trace_product(&d, rho_field)
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut sum = C64::default();
    for m in 0..n {
        for k in 0..n {
            sum += a[(m, k)] * b[(k, m)];
        }
    }
    sum
}
