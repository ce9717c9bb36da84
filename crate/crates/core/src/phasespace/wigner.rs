//! Wigner transforms by Fourier inversion of the characteristic function.
//!
//! With `a = x + iy` and `λ = u + iv` the inversion reads
//! `W(x, y) = π^{-2} ∫∫ e^{2i(u y - v x)} χ(u + iv) du dv`. The λ-grid is the
//! FFT conjugate of the a-grid: spacing `π / (2L)`, extent `π / h`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::characteristic::{displacement_elements, trace_product};
use super::fft::{Direction, Fft2};
use super::field::{OperatorPhaseField, PhaseFunction, PhaseKind};
use super::grid::PhaseGrid;
use crate::error::{mismatch, Error, Result};
use crate::fockspace::CompositeSpace;
use crate::linalg::{trace, CMatrix};

/// Accepted range of `∫ W` before a grid is declared too small.
pub const NORMALIZATION_WINDOW: (f64, f64) = (0.99, 1.01);

/// Wigner transforms of several field-space operators at once; linear in
/// each block, so non-Hermitian blocks give complex planes.
pub fn wigner_planes(blocks: &[CMatrix], grid: &PhaseGrid) -> Vec<Vec<C64>> {
    let m = grid.points();
    let dim = blocks.first().map_or(0, |b| b.nrows());
    let du = PI / (2.0 * grid.extent());
    let half = (m / 2) as f64;

    // chi[b][q * m + p] = (-1)^{p+q} χ_b(u_p + i v_q)
    let rows: Vec<Vec<Vec<C64>>> = (0..m)
        .into_par_iter()
        .map(|q| {
            let v = (q as f64 - half) * du;
            let mut out = vec![vec![C64::default(); m]; blocks.len()];
            for p in 0..m {
                let u = (p as f64 - half) * du;
                let d = displacement_elements(C64::new(u, v), dim);
                let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
                for (b, block) in blocks.iter().enumerate() {
                    out[b][p] = trace_product(&d, block) * sign;
                }
            }
            out
        })
        .collect();

    let fft = Fft2::new(m);
    let scale = du * du / (PI * PI);
    (0..blocks.len())
        .map(|b| {
            let mut plane: Vec<C64> = rows.iter().flat_map(|row| row[b].iter().copied()).collect();
            // p -> j (y) with e^{+2πi pj/M}, q -> i (x) with e^{-2πi qi/M}
            fft.rows(&mut plane, Direction::Inverse);
            fft.columns(&mut plane, Direction::Forward);
            for i in 0..m {
                for j in 0..m {
                    let sign = if (i + j) % 2 == 0 { scale } else { -scale };
                    plane[i * m + j] *= sign;
                }
            }
            plane
        })
        .collect()
}

fn check_normalization(value: f64) -> Result<()> {
    let (lo, hi) = NORMALIZATION_WINDOW;
    if !(lo..=hi).contains(&value) {
        return Err(Error::Normalization { value, lo, hi });
    }
    Ok(())
}

/// `tr(ρ (n + 1/2))` for a field operator.
fn symmetric_energy(rho_field: &CMatrix) -> f64 {
    (0..rho_field.nrows()).map(|n| rho_field[(n, n)].re * (n as f64 + 0.5)).sum()
}

/// The discrete inversion always integrates to `χ(0)`; a grid too small for
/// the state shows up instead as aliased mass in the second moment, which
/// must equal `tr(ρ (n + 1/2))`.
fn check_energy(plane: &[f64], grid: &PhaseGrid, expected: f64) -> Result<()> {
    if expected <= 0.0 {
        return Ok(());
    }
    let second: f64 = grid.nodes().zip(plane).map(|(a, v)| a.norm_sqr() * v).sum::<f64>() * grid.weight();
    check_normalization(second / expected)
}

/// Wigner function of a field density operator.
pub fn wigner(rho_field: &CMatrix, grid: &PhaseGrid) -> Result<PhaseFunction> {
    if !rho_field.is_square() {
        return Err(mismatch("square field operator", format!("{:?}", rho_field.shape())));
    }
    let plane = wigner_planes(std::slice::from_ref(rho_field), grid).remove(0);
    let w = PhaseFunction {
        grid: *grid,
        kind: PhaseKind::Wigner,
        values: plane.iter().map(|z| z.re).collect(),
    };
    check_normalization(w.integral())?;
    check_energy(&w.values, grid, symmetric_energy(rho_field))?;
    Ok(w)
}

/// Operator-valued Wigner transform over the field factor of a composite
/// operator: the sharp semiclassical density `ρ(a, a*)`.
pub fn sharp_density(rho: &CMatrix, space: CompositeSpace, grid: &PhaseGrid) -> Result<OperatorPhaseField> {
    let n = space.total_dim();
    if rho.shape() != (n, n) {
        return Err(mismatch(format!("{n}x{n}"), format!("{:?}", rho.shape())));
    }
    let d = space.atom_dim();
    let blocks: Vec<CMatrix> = (0..d * d).map(|k| space.field_block(rho, k / d, k % d)).collect();
    let planes = wigner_planes(&blocks, grid);
    let field = OperatorPhaseField {
        grid: *grid,
        atom_dim: d,
        planes,
    };
    let norm = field.atomic_trace().iter().map(|z| z.re).sum::<f64>() * grid.weight();
    check_normalization(norm / trace(rho).re)?;
    let traced: Vec<f64> = field.atomic_trace().iter().map(|z| z.re).collect();
    let energy: f64 = (0..d).map(|i| symmetric_energy(&blocks[i * d + i])).sum();
    check_energy(&traced, grid, energy)?;
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{partial_trace_atom, partial_trace_field, tensor, FockBasis};
    use crate::linalg::{c, max_abs, re, CVector};

    fn projector(dim: usize, n: usize) -> CMatrix {
        let mut p = CMatrix::zeros(dim, dim);
        p[(n, n)] = re(1.0);
        p
    }

    #[test]
    fn vacuum_wigner_is_gaussian() {
        let grid = PhaseGrid::new(8.0, 128).unwrap(); // h = 0.125
        let w = wigner(&projector(6, 0), &grid).unwrap();
        let err = grid
            .nodes()
            .zip(&w.values)
            .map(|(a, v)| (v - 2.0 / PI * (-2.0 * a.norm_sqr()).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert!((w.integral() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_photon_wigner_is_negative_at_origin() {
        let grid = PhaseGrid::default();
        let w = wigner(&projector(5, 1), &grid).unwrap();
        assert!((w.at(64, 64) + 2.0 / PI).abs() < 1e-6);
        assert!(w.min() < -0.6);
    }

    #[test]
    fn undersized_grid_is_rejected() {
        // A displaced state far outside the grid loses most of its mass.
        let basis = FockBasis::new(60).unwrap();
        let v = basis.coherent_state(c(4.5, 0.0));
        let rho = &v * v.adjoint();
        let grid = PhaseGrid::new(2.0, 32).unwrap();
        assert!(matches!(wigner(&rho, &grid), Err(Error::Normalization { .. })));
    }

    #[test]
    fn sharp_density_of_product_state_factorizes() {
        let basis = FockBasis::new(4).unwrap();
        let space = CompositeSpace::new(2, basis).unwrap();
        let atom = CMatrix::from_row_slice(2, 2, &[re(0.3), c(0.1, 0.4), c(0.1, -0.4), re(0.7)]);
        let rho = tensor(&atom, &projector(5, 0));
        let grid = PhaseGrid::new(5.0, 64).unwrap();
        let field = sharp_density(&rho, space, &grid).unwrap();
        for (k, a) in grid.nodes().enumerate().step_by(97) {
            let expected = &atom * re(2.0 / PI * (-2.0 * a.norm_sqr()).exp());
            assert!(max_abs(&(field.node_matrix(k) - expected)) < 1e-10);
        }
    }

    #[test]
    fn sharp_density_marginals() {
        let basis = FockBasis::new(5).unwrap();
        let space = CompositeSpace::new(2, basis).unwrap();
        let psi = CVector::from_fn(12, |k, _| c((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos() * 0.5));
        let psi = &psi / re(psi.norm());
        let rho = &psi * psi.adjoint();
        let grid = PhaseGrid::default();
        let field = sharp_density(&rho, space, &grid).unwrap();

        let reduced_field = partial_trace_atom(&rho, space).unwrap();
        let w = wigner(&reduced_field, &grid).unwrap();
        let trace = field.atomic_trace();
        let err = trace.iter().zip(&w.values).map(|(t, v)| (t.re - v).abs() + t.im.abs()).fold(0.0, f64::max);
        assert!(err < 1e-8);

        let atom = partial_trace_field(&rho, space).unwrap();
        assert!(max_abs(&(field.integral() - atom)) < 1e-6);
    }
}
