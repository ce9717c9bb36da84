//! Minimum coarse-graining: convolution with the vacuum-noise density
//! `w(a0) = (2/π) e^{-2|a0|²}`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::fft::{Direction, Fft2};
use super::field::{OperatorPhaseField, PhaseFunction, PhaseKind};
use super::grid::PhaseGrid;
use super::observable::{FieldSymbol, SemiclassicalObservable};
use crate::error::{mismatch, Error, Result};

/// Largest boundary mass tolerated before periodic wrap-around would pollute
/// the convolution.
pub const MAX_BOUNDARY_MASS: f64 = 1e-8;

/// Centred complex Gaussian `w(a0) = e^{-|a0|²/s} / (π s)` with mean square
/// `s = <|a0|²>`; the vacuum kernel has `s = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    mean_square: f64,
}

impl GaussianKernel {
    pub fn vacuum() -> Self {
        Self { mean_square: 0.5 }
    }

    /// Kernel with a non-vacuum width; used to build negative controls.
    pub fn with_mean_square(mean_square: f64) -> Result<Self> {
        if !(mean_square.is_finite() && mean_square > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kernel mean square must be positive, got {mean_square}"
            )));
        }
        Ok(Self { mean_square })
    }

    pub fn mean_square(&self) -> f64 {
        self.mean_square
    }

    pub fn density(&self, a0: C64) -> f64 {
        (-a0.norm_sqr() / self.mean_square).exp() / (PI * self.mean_square)
    }

    /// Kernel density on the nodes of `grid`.
    pub fn sampled(&self, grid: &PhaseGrid) -> PhaseFunction {
        PhaseFunction::from_fn(*grid, PhaseKind::Generic, |a| self.density(a))
    }

    /// Fourier transform `∫ w(a0) e^{-i(kx x0 + ky y0)} = e^{-s (kx² + ky²)/4}`.
    pub fn fourier_multiplier(&self, kx: f64, ky: f64) -> f64 {
        (-self.mean_square * (kx * kx + ky * ky) / 4.0).exp()
    }

    /// Periodic convolution of every plane with the kernel.
    pub(crate) fn convolve_planes(&self, planes: &mut [Vec<C64>], grid: &PhaseGrid) {
        let m = grid.points();
        let k = grid.wavenumbers();
        let fft = Fft2::new(m);
        let norm = 1.0 / (m * m) as f64;
        for plane in planes {
            fft.both(plane, Direction::Forward);
            for i in 0..m {
                for j in 0..m {
                    plane[i * m + j] *= self.fourier_multiplier(k[i], k[j]) * norm;
                }
            }
            fft.both(plane, Direction::Inverse);
        }
    }
}

impl Default for GaussianKernel {
    fn default() -> Self {
        Self::vacuum()
    }
}

fn check_grid(own: &PhaseGrid, grid: &PhaseGrid) -> Result<()> {
    if own != grid {
        return Err(mismatch(format!("{grid:?}"), format!("{own:?}")));
    }
    Ok(())
}

fn check_boundary(mass: f64) -> Result<()> {
    if mass > MAX_BOUNDARY_MASS {
        return Err(Error::BoundaryMass {
            mass,
            limit: MAX_BOUNDARY_MASS,
        });
    }
    Ok(())
}

/// Objects that can be smoothed by a [`GaussianKernel`].
pub trait CoarseGrain: Sized {
    fn coarse_grain_with(&self, kernel: &GaussianKernel, grid: &PhaseGrid) -> Result<Self>;
}

/// Minimum coarse-graining with the vacuum kernel.
pub fn coarse_grain<T: CoarseGrain>(f: &T, grid: &PhaseGrid) -> Result<T> {
    f.coarse_grain_with(&GaussianKernel::vacuum(), grid)
}

impl CoarseGrain for PhaseFunction {
    fn coarse_grain_with(&self, kernel: &GaussianKernel, grid: &PhaseGrid) -> Result<Self> {
        check_grid(&self.grid, grid)?;
        check_boundary(self.boundary_mass())?;
        let mut planes = vec![self.values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>()];
        kernel.convolve_planes(&mut planes, grid);
        let kind = match self.kind {
            PhaseKind::Wigner => PhaseKind::Husimi,
            other => other,
        };
        Ok(PhaseFunction {
            grid: *grid,
            kind,
            values: planes[0].iter().map(|z| z.re).collect(),
        })
    }
}

impl CoarseGrain for OperatorPhaseField {
    fn coarse_grain_with(&self, kernel: &GaussianKernel, grid: &PhaseGrid) -> Result<Self> {
        check_grid(&self.grid, grid)?;
        check_boundary(self.boundary_mass())?;
        let mut planes = self.planes.clone();
        kernel.convolve_planes(&mut planes, grid);
        Ok(OperatorPhaseField {
            grid: *grid,
            atom_dim: self.atom_dim,
            planes,
        })
    }
}

/// Polynomial symbols are smoothed exactly through Gaussian moments; other
/// symbols are sampled and convolved, which requires them to decay at the
/// grid edge.
impl CoarseGrain for SemiclassicalObservable {
    fn coarse_grain_with(&self, kernel: &GaussianKernel, grid: &PhaseGrid) -> Result<Self> {
        let symbol = match &self.symbol {
            FieldSymbol::Polynomial(p) => FieldSymbol::Polynomial(p.gaussian_smoothed(kernel.mean_square())),
            _ => {
                let values = self.sample(grid)?;
                let mass = grid.boundary().map(|k| values[k].norm()).sum::<f64>() * grid.weight();
                check_boundary(mass)?;
                let mut planes = vec![values];
                kernel.convolve_planes(&mut planes, grid);
                FieldSymbol::Sampled {
                    grid: *grid,
                    values: planes.pop().unwrap_or_default(),
                }
            }
        };
        Ok(SemiclassicalObservable {
            atomic: self.atomic.clone(),
            symbol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_kernel_moments() {
        let grid = PhaseGrid::default();
        let w = GaussianKernel::vacuum().sampled(&grid);
        let tol = grid.tol_grid();
        assert!((w.integral() - 1.0).abs() < tol);
        let second: f64 = grid.nodes().zip(&w.values).map(|(a, v)| a.norm_sqr() * v).sum::<f64>() * grid.weight();
        assert!((second - 0.5).abs() < tol);
        assert!((GaussianKernel::vacuum().density(C64::default()) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn vacuum_wigner_smooths_to_vacuum_husimi() {
        let grid = PhaseGrid::default();
        let w = PhaseFunction::from_fn(grid, PhaseKind::Wigner, |a| 2.0 / PI * (-2.0 * a.norm_sqr()).exp());
        let q = coarse_grain(&w, &grid).unwrap();
        assert_eq!(q.kind, PhaseKind::Husimi);
        let err = grid
            .nodes()
            .zip(&q.values)
            .map(|(a, v)| (v - (-a.norm_sqr()).exp() / PI).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn polynomial_observables_smooth_exactly() {
        let grid = PhaseGrid::default();
        let fbar = coarse_grain(&SemiclassicalObservable::abs_sq(), &grid).unwrap();
        let a = C64::new(1.5, -0.5);
        let p = fbar.as_polynomial().unwrap();
        assert!((p.evaluate(a) - (a.norm_sqr() + 0.5)).norm() < 1e-15);

        let c = coarse_grain(&SemiclassicalObservable::one(), &grid).unwrap();
        assert_eq!(c.as_polynomial().unwrap().evaluate(a), C64::new(1.0, 0.0));
    }

    #[test]
    fn sampled_constant_inside_decaying_window_survives() {
        // A localized bump keeps its integral under smoothing.
        let grid = PhaseGrid::default();
        let obs = SemiclassicalObservable::function(|a| C64::new((-a.norm_sqr()).exp(), 0.0));
        let smoothed = coarse_grain(&obs, &grid).unwrap();
        let before: C64 = obs.sample(&grid).unwrap().iter().sum();
        let after: C64 = smoothed.sample(&grid).unwrap().iter().sum();
        assert!((before - after).norm() * grid.weight() < 1e-10);
        // e^{-|a|^2} smoothed by mean square 1/2 is (2/3) e^{-2|a|^2/3}.
        let v = smoothed.sample(&grid).unwrap();
        let k = grid.flat(64, 64);
        assert!((v[k].re - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn growing_sampled_symbol_is_rejected() {
        let grid = PhaseGrid::default();
        let obs = SemiclassicalObservable::function(|a| C64::new(a.norm_sqr(), 0.0));
        assert!(matches!(coarse_grain(&obs, &grid), Err(Error::BoundaryMass { .. })));
    }
}
