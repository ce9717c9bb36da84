use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square grid over `Re a, Im a ∈ [-L, L)` with `M` nodes per axis.
///
/// Nodes sit at `x_k = -L + k h`, `h = 2L / M`. The measure `da* da` is read
/// as `dx dy`, so every node carries quadrature weight `h²`. Node `(i, j)`
/// holds `a = x_i + i y_j` and is stored at flat index `i * M + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    extent: f64,
    points: usize,
}

impl PhaseGrid {
    pub const DEFAULT_EXTENT: f64 = 5.0;
    pub const DEFAULT_POINTS: usize = 128;

    pub fn new(extent: f64, points: usize) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidParameter(format!("grid extent must be positive, got {extent}")));
        }
        if points < 32 || !points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "points per axis must be a power of two >= 32, got {points}"
            )));
        }
        Ok(Self { extent, points })
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points * self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.points as f64
    }

    pub fn weight(&self) -> f64 {
        self.spacing().powi(2)
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        -self.extent + k as f64 * self.spacing()
    }

    #[inline]
    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.points + j
    }

    /// `a` at flat node index `node`.
    #[inline]
    pub fn node(&self, node: usize) -> C64 {
        C64::new(self.coordinate(node / self.points), self.coordinate(node % self.points))
    }

    pub fn nodes(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.len()).map(|k| self.node(k))
    }

    /// Flat indices of the outermost ring of nodes.
    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.points;
        (0..self.len()).filter(move |&k| {
            let (i, j) = (k / m, k % m);
            i == 0 || j == 0 || i == m - 1 || j == m - 1
        })
    }

    /// Angular wavenumbers of the FFT bins along one axis, in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let m = self.points as i64;
        let dk = std::f64::consts::PI / self.extent;
        (0..m)
            .map(|k| if k < m / 2 { k } else { k - m })
            .map(|k| k as f64 * dk)
            .collect()
    }

    /// Quadrature tolerance used for normalization and smoothing checks.
    ///
    /// Ten times the bound on the quadrature error for Q-functions of states
    /// with at most four quanta: the mass of `e^{-r²} r^{2n}/n!` (n ≤ 4) outside
    /// the inscribed disk of radius `L`, plus the aliasing term `e^{-π²/h²}`
    /// of the trapezoidal rule. Floored at 1e-9 to leave room for round-off.
    pub fn tol_grid(&self) -> f64 {
        let r2 = self.extent * self.extent;
        let mut term = 1.0;
        let mut tail = 1.0;
        for k in 1..=4 {
            term *= r2 / k as f64;
            tail += term;
        }
        let truncation = (-r2).exp() * tail;
        let aliasing = (-(std::f64::consts::PI / self.spacing()).powi(2)).exp();
        (10.0 * (truncation + aliasing)).max(1e-9)
    }
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self {
            extent: Self::DEFAULT_EXTENT,
            points: Self::DEFAULT_POINTS,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_layout() {
        let g = PhaseGrid::default();
        assert_eq!(g.points(), 128);
        assert!((g.spacing() - 0.078125).abs() < 1e-15);
        assert_eq!(g.coordinate(0), -5.0);
        assert_eq!(g.coordinate(64), 0.0);
        assert_eq!(g.node(g.flat(64, 65)), C64::new(0.0, 0.078125));
        assert_eq!(g.boundary().count(), 4 * 127);
    }

    #[test]
    fn default_tolerance_is_tight() {
        let tol = PhaseGrid::default().tol_grid();
        assert!(tol <= 1e-4, "{tol}");
        assert!(tol > 1e-7);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(PhaseGrid::new(5.0, 16).is_err());
        assert!(PhaseGrid::new(5.0, 96).is_err());
        assert!(PhaseGrid::new(-1.0, 64).is_err());
    }

    #[test]
    fn wavenumbers_in_fft_order() {
        let g = PhaseGrid::new(std::f64::consts::PI, 32).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[1], 1.0);
        assert_eq!(k[16], -16.0);
        assert_eq!(k[31], -1.0);
    }
}
