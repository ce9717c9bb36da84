use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::field::{OperatorPhaseField, PhaseFunction, PhaseKind};
use super::grid::PhaseGrid;
use crate::error::{mismatch, Result};
use crate::fockspace::{CompositeSpace, FockBasis};
use crate::linalg::CMatrix;

/// Truncation deficits above this mark a node as poorly represented by the
/// cut coherent state.
pub const DEFICIT_FLAG: f64 = 1e-10;

/// `1 - ∑_{n ≤ n_max} e^{-|a|²} |a|^{2n} / n!`: the norm the truncated
/// coherent state `|a>` is missing.
pub fn coherent_truncation_deficit(a: C64, basis: FockBasis) -> f64 {
    let x = a.norm_sqr();
    let mut term = (-x).exp();
    let mut kept = term;
    for n in 1..=basis.n_max() {
        term *= x / n as f64;
        kept += term;
    }
    (1.0 - kept).max(0.0)
}

/// Nodes whose coherent-state truncation deficit exceeds [`DEFICIT_FLAG`].
///
/// For operators supported inside the truncated space the Husimi values
/// there are still exact; the flag only tells that the node probes
/// occupations the truncation cannot hold.
pub fn flagged_nodes(grid: &PhaseGrid, basis: FockBasis) -> Vec<usize> {
    (0..grid.len())
        .filter(|&k| coherent_truncation_deficit(grid.node(k), basis) > DEFICIT_FLAG)
        .collect()
}

/// Operator-valued Husimi density `(1/π) <a| ρ |a>` over the field factor.
pub fn husimi_density(rho: &CMatrix, space: CompositeSpace, grid: &PhaseGrid) -> Result<OperatorPhaseField> {
    let n = space.total_dim();
    if rho.shape() != (n, n) {
        return Err(mismatch(format!("{n}x{n}"), format!("{:?}", rho.shape())));
    }
    let basis = space.fock();
    let d = space.atom_dim();
    let f = space.field_dim();

    let flagged = flagged_nodes(grid, basis).len();
    if flagged > 0 {
        log::debug!("husimi_density: {flagged} nodes beyond the coherent-state truncation of n_max = {}", basis.n_max());
    }

    let node_values: Vec<Vec<C64>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let coh = basis.coherent_unnormalized(grid.node(k));
            let mut out = vec![C64::default(); d * d];
            for r in 0..d {
                for s in 0..d {
                    let mut acc = C64::default();
                    for m in 0..f {
                        let left = coh[m].conj();
                        if left == C64::default() {
                            continue;
                        }
                        let row = space.index(r, m);
                        let mut inner = C64::default();
                        for l in 0..f {
                            inner += rho[(row, space.index(s, l))] * coh[l];
                        }
                        acc += left * inner;
                    }
                    out[r * d + s] = acc / PI;
                }
            }
            out
        })
        .collect();

    let mut field = OperatorPhaseField::zeros(*grid, d);
    for (k, values) in node_values.into_iter().enumerate() {
        for (plane, v) in field.planes.iter_mut().zip(values) {
            plane[k] = v;
        }
    }
    Ok(field)
}

/// Husimi Q-function of a field density operator.
pub fn husimi(rho_field: &CMatrix, grid: &PhaseGrid) -> Result<PhaseFunction> {
    if !rho_field.is_square() {
        return Err(mismatch("square field operator", format!("{:?}", rho_field.shape())));
    }
    let basis = FockBasis::new(rho_field.nrows().saturating_sub(1))?;
    let space = CompositeSpace::new(1, basis)?;
    Ok(husimi_density(rho_field, space, grid)?.trace_function(PhaseKind::Husimi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::tensor;
    use crate::linalg::{c, max_abs, re};

    #[test]
    fn vacuum_product_state() {
        let basis = FockBasis::new(4).unwrap();
        let space = CompositeSpace::new(2, basis).unwrap();
        let atom = CMatrix::from_row_slice(2, 2, &[re(0.5), c(0.0, 0.5), c(0.0, -0.5), re(0.5)]);
        let mut vac = CMatrix::zeros(5, 5);
        vac[(0, 0)] = re(1.0);
        let grid = PhaseGrid::new(4.0, 32).unwrap();
        let q = husimi_density(&tensor(&atom, &vac), space, &grid).unwrap();
        for (k, a) in grid.nodes().enumerate() {
            let expected = &atom * re((-a.norm_sqr()).exp() / PI);
            assert!(max_abs(&(q.node_matrix(k) - expected)) < 1e-15);
        }
        assert!(q.min_eigenvalue() > -1e-15);
    }

    #[test]
    fn fock_one_husimi() {
        let mut rho = CMatrix::zeros(6, 6);
        rho[(1, 1)] = re(1.0);
        let grid = PhaseGrid::default();
        let q = husimi(&rho, &grid).unwrap();
        for (k, a) in grid.nodes().enumerate().step_by(131) {
            let x = a.norm_sqr();
            assert!((q.values[k] - x * (-x).exp() / PI).abs() < 1e-15);
        }
        assert!((q.integral() - 1.0).abs() < grid.tol_grid());
    }

    #[test]
    fn truncation_deficit() {
        let basis = FockBasis::new(8).unwrap();
        assert!(coherent_truncation_deficit(C64::default(), basis) < 1e-16);
        assert!(coherent_truncation_deficit(c(3.0, 0.0), basis) > 1e-3);
        let grid = PhaseGrid::default();
        let flagged = flagged_nodes(&grid, basis);
        assert!(!flagged.is_empty());
        assert!(flagged.iter().all(|&k| coherent_truncation_deficit(grid.node(k), basis) > DEFICIT_FLAG));
        assert!(!flagged.contains(&grid.flat(64, 64)));
    }
}
