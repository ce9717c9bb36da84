//! The semiclassical wave equation discretized directly on a phase-space grid:
//! `dψ/dt = -i (a* j + (a/2) j†) ψ - i j† ∂ψ/∂a*`, with the Wirtinger
//! derivative `∂/∂a* = (∂_x + i ∂_y) / 2`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::wave::SemiclassicalWave;
use crate::error::{mismatch, Error, Result};
use crate::linalg::CMatrix;
use crate::phasespace::fft::{Direction, Fft2};
use crate::phasespace::PhaseGrid;
use crate::rk4::rk4_step;
use crate::unitary::{rotated_current, AtomFieldModel, TimeGrid, Trajectory};

/// Largest probability tolerated on the outermost ring of nodes.
pub const MAX_BOUNDARY_MASS: f64 = 1e-8;

/// Default wavenumber cutoff of the spectral derivative. States with Gaussian
/// decay carry no content above it at double precision, while unresolved
/// round-off there is amplified by the `a* ∂/∂a*` coupling.
pub const DEFAULT_CUTOFF: f64 = 12.0;

/// Discretization of `∂/∂a*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeScheme {
    /// Fourier differentiation on the periodic grid.
    #[default]
    Spectral,
    /// Fourth-order central differences.
    FiniteDifference,
}

/// Reusable grid integrator: FFT plans and derivative multipliers for one grid.
#[derive(Debug, Clone)]
pub struct GridSolver {
    grid: PhaseGrid,
    scheme: DerivativeScheme,
    fft: Fft2,
    multiplier: Vec<C64>,
    nodes: Vec<C64>,
}

impl GridSolver {
    pub fn new(grid: PhaseGrid, scheme: DerivativeScheme) -> Self {
        Self::with_cutoff(grid, scheme, DEFAULT_CUTOFF)
    }

    /// Spectral derivative restricted to wavenumbers `|k| <= cutoff`; pass
    /// `f64::INFINITY` for the full band.
    pub fn with_cutoff(grid: PhaseGrid, scheme: DerivativeScheme, cutoff: f64) -> Self {
        let m = grid.points();
        let mut k = grid.wavenumbers();
        // The Nyquist mode has no odd derivative.
        k[m / 2] = 0.0;
        let mut multiplier = Vec::with_capacity(grid.len());
        let norm = 1.0 / (m * m) as f64;
        for &kx in &k {
            for &ky in &k {
                let keep = kx * kx + ky * ky <= cutoff * cutoff;
                multiplier.push(if keep { C64::new(-0.5 * ky, 0.5 * kx) * norm } else { C64::default() });
            }
        }
        Self {
            grid,
            scheme,
            fft: Fft2::new(m),
            multiplier,
            nodes: grid.nodes().collect(),
        }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn scheme(&self) -> DerivativeScheme {
        self.scheme
    }

    /// `∂f/∂a*` at every node.
    pub fn d_dconj(&self, f: &[C64]) -> Vec<C64> {
        match self.scheme {
            DerivativeScheme::Spectral => {
                let mut work = f.to_vec();
                self.fft.both(&mut work, Direction::Forward);
                for (w, m) in work.iter_mut().zip(&self.multiplier) {
                    *w *= m;
                }
                self.fft.both(&mut work, Direction::Inverse);
                work
            }
            DerivativeScheme::FiniteDifference => {
                let m = self.grid.points();
                let h = self.grid.spacing();
                let at = |i: usize, j: usize| f[(i % m) * m + (j % m)];
                let mut out = vec![C64::default(); f.len()];
                for i in 0..m {
                    for j in 0..m {
                        let (ip1, ip2, im1, im2) = (i + 1, i + 2, i + m - 1, i + m - 2);
                        let (jp1, jp2, jm1, jm2) = (j + 1, j + 2, j + m - 1, j + m - 2);
                        let dx = (-at(ip2, j) + at(ip1, j) * 8.0 - at(im1, j) * 8.0 + at(im2, j)) / (12.0 * h);
                        let dy = (-at(i, jp2) + at(i, jp1) * 8.0 - at(i, jm1) * 8.0 + at(i, jm2)) / (12.0 * h);
                        out[i * m + j] = (dx + C64::new(0.0, 1.0) * dy) * 0.5;
                    }
                }
                out
            }
        }
    }

    /// Right-hand side for explicit currents `j` and `jd` (normally `j†`).
    pub fn rhs_with(&self, j: &CMatrix, jd: &CMatrix, psi: &[Vec<C64>]) -> Vec<Vec<C64>> {
        let d = psi.len();
        let derivs: Vec<Option<Vec<C64>>> = (0..d)
            .map(|s| {
                let needed = (0..d).any(|r| jd[(r, s)] != C64::default());
                needed.then(|| self.d_dconj(&psi[s]))
            })
            .collect();
        let minus_i = C64::new(0.0, -1.0);
        (0..d)
            .map(|r| {
                let mut out = vec![C64::default(); self.grid.len()];
                for s in 0..d {
                    let (jrs, jdrs) = (j[(r, s)], jd[(r, s)]);
                    if jrs == C64::default() && jdrs == C64::default() {
                        continue;
                    }
                    let half_jd = jdrs * 0.5;
                    for (k, o) in out.iter_mut().enumerate() {
                        let a = self.nodes[k];
                        *o += (a.conj() * jrs + a * half_jd) * psi[s][k];
                    }
                    if let Some(ds) = &derivs[s] {
                        for (o, dv) in out.iter_mut().zip(ds) {
                            *o += jdrs * dv;
                        }
                    }
                }
                for o in &mut out {
                    *o *= minus_i;
                }
                out
            })
            .collect()
    }

    fn check(&self, model: &AtomFieldModel, wave: &SemiclassicalWave) -> Result<()> {
        if model.atom_dim() != wave.atom_dim() {
            return Err(mismatch(model.atom_dim(), wave.atom_dim()));
        }
        match wave.grid() {
            Some(g) if *g == self.grid => Ok(()),
            Some(g) => Err(mismatch(format!("{:?}", self.grid), format!("{g:?}"))),
            None => Err(Error::Representation { expected: "grid" }),
        }
    }

    fn boundary_mass(&self, psi: &[Vec<C64>]) -> f64 {
        self.grid
            .boundary()
            .map(|k| psi.iter().map(|c| c[k].norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * self.grid.weight()
    }

    /// One RK4 step from `t` to `t + dt`.
    pub fn step(&self, model: &AtomFieldModel, wave: &SemiclassicalWave, t: f64, dt: f64) -> Result<SemiclassicalWave> {
        self.check(model, wave)?;
        let psi = wave.components().expect("grid wave").to_vec();
        let next = rk4_step(
            |s, psi: &Vec<Vec<C64>>| -> Result<Vec<Vec<C64>>> {
                let j = rotated_current(model, s);
                Ok(self.rhs_with(&j, &j.adjoint(), psi))
            },
            t,
            &psi,
            dt,
        )?;
        let mass = self.boundary_mass(&next);
        if mass > MAX_BOUNDARY_MASS {
            return Err(Error::BoundaryMass {
                mass,
                limit: MAX_BOUNDARY_MASS,
            });
        }
        let mut out = wave.clone();
        *out.components_mut().expect("grid wave") = next;
        out.set_time(t + dt);
        Ok(out)
    }

    pub fn evolve(
        &self,
        model: &AtomFieldModel,
        wave: &SemiclassicalWave,
        grid: &TimeGrid,
    ) -> Result<Trajectory<SemiclassicalWave>> {
        grid.validate()?;
        self.check(model, wave)?;
        let samples = grid.sample_steps();
        let mut trajectory = Trajectory {
            times: Vec::with_capacity(samples.len()),
            states: Vec::with_capacity(samples.len()),
        };
        let mut current = wave.clone();
        current.set_time(grid.t_start);
        let mut next_sample = samples.iter().peekable();
        for step in 0..=grid.steps() {
            if next_sample.peek() == Some(&&step) {
                next_sample.next();
                trajectory.times.push(grid.time(step));
                trajectory.states.push(current.clone());
            }
            if step < grid.steps() {
                current = self.step(model, &current, grid.time(step), grid.dt)?;
                current.set_time(grid.time(step + 1));
            }
        }
        Ok(trajectory)
    }
}

/// One spectral RK4 step of a grid wave.
pub fn step_grid(model: &AtomFieldModel, wave: &SemiclassicalWave, t: f64, dt: f64) -> Result<SemiclassicalWave> {
    let grid = *wave.grid().ok_or(Error::Representation { expected: "grid" })?;
    GridSolver::new(grid, DerivativeScheme::Spectral).step(model, wave, t, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, re, CVector};
    use crate::swe::wave::{initial_wave, Support};

    #[test]
    fn spectral_wirtinger_derivative() {
        let grid = PhaseGrid::new(6.0, 64).unwrap();
        // f = a* e^{-|a|^2}: ∂f/∂a* = (1 - |a|^2) e^{-|a|^2}
        let f: Vec<C64> = grid.nodes().map(|a| a.conj() * (-a.norm_sqr()).exp()).collect();
        for scheme in [DerivativeScheme::Spectral, DerivativeScheme::FiniteDifference] {
            let d = GridSolver::new(grid, scheme).d_dconj(&f);
            let err = grid
                .nodes()
                .zip(&d)
                .map(|(a, v)| (v - re((1.0 - a.norm_sqr()) * (-a.norm_sqr()).exp())).norm())
                .fold(0.0, f64::max);
            let tol = if scheme == DerivativeScheme::Spectral { 1e-10 } else { 1e-2 };
            assert!(err < tol, "{scheme:?}: {err}");
        }
        // Holomorphic functions are annihilated: a e^{-|a|^2} has ∂/∂a* = -a^2 e^{-|a|^2}.
        let g: Vec<C64> = grid.nodes().map(|a| a * (-a.norm_sqr()).exp()).collect();
        let d = GridSolver::new(grid, DerivativeScheme::Spectral).d_dconj(&g);
        let err = grid
            .nodes()
            .zip(&d)
            .map(|(a, v)| (v + a * a * (-a.norm_sqr()).exp()).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn no_coupling_no_motion() {
        let grid = PhaseGrid::new(6.0, 32).unwrap();
        let model = AtomFieldModel::new(CMatrix::identity(2, 2), CMatrix::zeros(2, 2), 1.0).unwrap();
        let w = initial_wave(&CVector::from_vec(vec![re(1.0), re(0.0)]), Support::Grid(grid)).unwrap();
        let next = step_grid(&model, &w, 0.0, 0.01).unwrap();
        assert_eq!(next.components(), w.components());
    }

    #[test]
    fn multiplication_term_alone() {
        let grid = PhaseGrid::new(6.0, 32).unwrap();
        let solver = GridSolver::new(grid, DerivativeScheme::Spectral);
        let psi0 = CVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let w = initial_wave(&psi0, Support::Grid(grid)).unwrap();
        // With the j† terms switched off each node evolves as exp(-i a* j t) ψ(a).
        let j = CMatrix::from_row_slice(2, 2, &[re(0.7), C64::new(0.2, 0.3), C64::new(0.2, -0.3), re(-0.4)]);
        let jd = CMatrix::zeros(2, 2);
        let mut psi = w.components().unwrap().to_vec();
        let (dt, steps) = (1e-3, 500);
        for step in 0..steps {
            psi = rk4_step(
                |_, p: &Vec<Vec<C64>>| Ok::<_, Error>(solver.rhs_with(&j, &jd, p)),
                step as f64 * dt,
                &psi,
                dt,
            )
            .unwrap();
        }
        let t = dt * steps as f64;
        let before = w.components().unwrap();
        for (k, a) in grid.nodes().enumerate() {
            let v0 = CVector::from_iterator(2, before.iter().map(|c| c[k]));
            let exact = expm(&(&j * (C64::new(0.0, -t) * a.conj()))) * &v0;
            let got = CVector::from_iterator(2, psi.iter().map(|c| c[k]));
            assert!((got - &exact).norm() <= 1e-10 * exact.norm().max(1e-30));
            // Hermitian j and real a*: a pure phase rotation.
            if a.im == 0.0 {
                assert!((exact.norm() - v0.norm()).abs() <= 1e-12 * v0.norm().max(1e-30));
            }
        }
    }

    #[test]
    fn agrees_with_bargmann_backend() {
        use crate::fockspace::FockBasis;
        use crate::swe::bargmann::evolve_bargmann;
        use crate::swe::wave::evaluate_on_grid;

        let grid = PhaseGrid::new(8.0, 64).unwrap();
        let model = AtomFieldModel::two_level(1.0, 0.0, 1.0).unwrap();
        let atom = CVector::from_vec(vec![re(1.0), re(0.0)]);
        let times = TimeGrid::covering(0.0, 0.5, 1e-3, 250).unwrap();
        let reference = evolve_bargmann(&model, &initial_wave(&atom, Support::Bargmann(FockBasis::new(8).unwrap())).unwrap(), &times)
            .unwrap();
        for (scheme, tol) in [(DerivativeScheme::Spectral, 1e-9), (DerivativeScheme::FiniteDifference, 1e-3)] {
            let run = GridSolver::new(grid, scheme)
                .evolve(&model, &initial_wave(&atom, Support::Grid(grid)).unwrap(), &times)
                .unwrap();
            for (w, b) in run.states.iter().zip(&reference.states) {
                let b = evaluate_on_grid(b, &grid).unwrap();
                let (x, y) = (w.components().unwrap(), b.components().unwrap());
                let err = x
                    .iter()
                    .zip(y)
                    .flat_map(|(p, q)| p.iter().zip(q).map(|(u, v)| (u - v).norm()))
                    .fold(0.0, f64::max);
                assert!(err <= tol * b.max_norm().unwrap(), "{scheme:?}: {err}");
            }
        }
    }

    #[test]
    fn too_small_grid_is_reported() {
        let grid = PhaseGrid::new(1.5, 32).unwrap();
        let model = AtomFieldModel::two_level(1.0, 0.0, 1.0).unwrap();
        let w = initial_wave(&CVector::from_vec(vec![re(1.0), re(0.0)]), Support::Grid(grid)).unwrap();
        assert!(matches!(step_grid(&model, &w, 0.0, 1e-3), Err(Error::BoundaryMass { .. })));
    }
}
