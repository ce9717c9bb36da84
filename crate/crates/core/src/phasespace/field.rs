use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::grid::PhaseGrid;
use crate::error::{mismatch, Result};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    Wigner,
    Husimi,
    Generic,
}

impl PhaseKind {
    pub fn name(&self) -> &'static str {
        match self {
            PhaseKind::Wigner => "wigner",
            PhaseKind::Husimi => "husimi",
            PhaseKind::Generic => "generic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "wigner" => Some(PhaseKind::Wigner),
            "husimi" => Some(PhaseKind::Husimi),
            "generic" => Some(PhaseKind::Generic),
            _ => None,
        }
    }
}

/// Real scalar function sampled on a [`PhaseGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    pub grid: PhaseGrid,
    pub kind: PhaseKind,
    pub values: Vec<f64>,
}

impl PhaseFunction {
    pub fn new(grid: PhaseGrid, kind: PhaseKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(mismatch(grid.len(), values.len()));
        }
        Ok(Self { grid, kind, values })
    }

    pub fn from_fn(grid: PhaseGrid, kind: PhaseKind, f: impl Fn(C64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, kind, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.flat(i, j)]
    }

    /// `∫ f da* da` by the node quadrature.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.weight()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `∑_boundary |f| h²`.
    pub fn boundary_mass(&self) -> f64 {
        self.grid.boundary().map(|k| self.values[k].abs()).sum::<f64>() * self.grid.weight()
    }

    /// Largest node-wise difference.
    pub fn linf_distance(&self, other: &PhaseFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(mismatch(format!("{:?}", self.grid), format!("{:?}", other.grid)));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Atomic-matrix-valued function on a [`PhaseGrid`].
///
/// Entry `(r, s)` of every node matrix lives in its own plane,
/// `planes[r * atom_dim + s][node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPhaseField {
    pub grid: PhaseGrid,
    pub atom_dim: usize,
    pub planes: Vec<Vec<C64>>,
}

impl OperatorPhaseField {
    pub fn zeros(grid: PhaseGrid, atom_dim: usize) -> Self {
        Self {
            grid,
            atom_dim,
            planes: vec![vec![C64::default(); grid.len()]; atom_dim * atom_dim],
        }
    }

    pub fn plane(&self, r: usize, s: usize) -> &[C64] {
        &self.planes[r * self.atom_dim + s]
    }

    pub fn node_matrix(&self, node: usize) -> CMatrix {
        let d = self.atom_dim;
        CMatrix::from_fn(d, d, |r, s| self.planes[r * d + s][node])
    }

    /// `tr_atom` at every node.
    pub fn atomic_trace(&self) -> Vec<C64> {
        let d = self.atom_dim;
        (0..self.grid.len())
            .map(|k| (0..d).map(|r| self.planes[r * d + r][k]).sum())
            .collect()
    }

    /// Real part of the atomic trace as a scalar phase function.
    pub fn trace_function(&self, kind: PhaseKind) -> PhaseFunction {
        PhaseFunction {
            grid: self.grid,
            kind,
            values: self.atomic_trace().iter().map(|z| z.re).collect(),
        }
    }

    /// `∫ ρ(a, a*) da* da`, an atomic operator.
    pub fn integral(&self) -> CMatrix {
        let d = self.atom_dim;
        let w = self.grid.weight();
        CMatrix::from_fn(d, d, |r, s| self.planes[r * d + s].iter().sum::<C64>() * w)
    }

    /// Largest entry-wise difference over all nodes.
    pub fn linf_distance(&self, other: &OperatorPhaseField) -> Result<f64> {
        if self.grid != other.grid || self.atom_dim != other.atom_dim {
            return Err(mismatch("matching grid and atom dimension", "different fields"));
        }
        Ok(self
            .planes
            .iter()
            .zip(&other.planes)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    /// Root-mean-square entry difference weighted by the quadrature, `(∫ ||Δ||_F² )^{1/2}`.
    pub fn l2_distance(&self, other: &OperatorPhaseField) -> Result<f64> {
        if self.grid != other.grid || self.atom_dim != other.atom_dim {
            return Err(mismatch("matching grid and atom dimension", "different fields"));
        }
        let sum: f64 = self
            .planes
            .iter()
            .zip(&other.planes)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()))
            .sum();
        Ok((sum * self.grid.weight()).sqrt())
    }

    pub fn max_entry(&self) -> f64 {
        self.planes.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part of any node matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        (0..self.grid.len())
            .map(|k| {
                let m = self.node_matrix(k);
                let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
                h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn boundary_mass(&self) -> f64 {
        let w = self.grid.weight();
        self.grid
            .boundary()
            .map(|k| self.planes.iter().map(|p| p[k].norm()).fold(0.0, f64::max))
            .sum::<f64>()
            * w
    }
}
