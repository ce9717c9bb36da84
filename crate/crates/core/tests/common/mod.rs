#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swe_core::{CMatrix, CVector, CompositeSpace, CompositeState, FockBasis};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c(rng: &mut ChaCha8Rng) -> C64 {
    // Box-Muller
    let (u, v): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
    let r = (-2.0 * u.ln()).sqrt();
    C64::from_polar(r, 2.0 * std::f64::consts::PI * v)
}

/// Random matrix with nonzero entries only where both indices are `<= support`.
pub fn random_operator(rng: &mut ChaCha8Rng, dim: usize, support: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| {
        if i <= support && j <= support {
            gaussian_c(rng)
        } else {
            C64::default()
        }
    })
}

/// Unit vector supported on the first `support + 1` entries.
pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize, support: usize) -> CVector {
    let v = CVector::from_fn(dim, |i, _| if i <= support { gaussian_c(rng) } else { C64::default() });
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Random composite state with Fock occupations `<= support`.
pub fn random_composite(rng: &mut ChaCha8Rng, space: CompositeSpace, support: usize) -> CompositeState {
    let f = space.field_dim();
    let v = CVector::from_fn(space.total_dim(), |k, _| {
        if k % f <= support {
            gaussian_c(rng)
        } else {
            C64::default()
        }
    });
    let n = v.norm();
    CompositeState::new(space, v / C64::new(n, 0.0)).unwrap()
}

pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn basis(n_max: usize) -> FockBasis {
    FockBasis::new(n_max).unwrap()
}

pub fn excited() -> CVector {
    CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
}

/// Largest entry modulus restricted to indices `<= limit`.
pub fn block_max(m: &CMatrix, limit: usize) -> f64 {
    let mut out = 0.0_f64;
    for i in 0..=limit.min(m.nrows() - 1) {
        for j in 0..=limit.min(m.ncols() - 1) {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}
