//! Reference solver: interaction-picture Schrödinger equation of the atom plus
//! cavity mode, `dΨ/dt = -i H_I(t) Ψ` with `H_I(t) = j(t) ⊗ a† + j†(t) ⊗ a`.
//!
//! Units have ħ = 1. The free evolution of atom and mode is absorbed into the
//! rotated current `j(t) = e^{iωt} e^{iH_ato t} J e^{-iH_ato t}`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::fockspace::{tensor, CompositeSpace, CompositeState};
use crate::linalg::{c, hermitian_deviation, hermitian_unitary, re, spectral_norm_estimate, CMatrix, CVector};
use crate::rk4::rk4_step;

/// Guard on `dt * ||H_I||` accepted by [`evolve_unitary`].
pub const MAX_STEP_NORM: f64 = 0.05;
/// Largest tolerated `| ||Ψ|| - 1 |` over a run.
pub const MAX_NORM_DRIFT: f64 = 1e-6;

/// Atomic Hamiltonian, current operator and mode frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFieldModel {
    h_atom: CMatrix,
    current: CMatrix,
    omega: f64,
}

impl AtomFieldModel {
    pub fn new(h_atom: CMatrix, current: CMatrix, omega: f64) -> Result<Self> {
        let d = h_atom.nrows();
        if !h_atom.is_square() || current.shape() != (d, d) || d == 0 {
            return Err(mismatch(
                "square atomic Hamiltonian and current of equal size",
                format!("{:?} and {:?}", h_atom.shape(), current.shape()),
            ));
        }
        let deviation = hermitian_deviation(&h_atom);
        if deviation > 1e-12 {
            return Err(Error::NotHermitian {
                what: "atomic Hamiltonian",
                deviation,
            });
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mode frequency must be finite and non-negative, got {omega}"
            )));
        }
        if h_atom.iter().chain(current.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite model matrix entry".into()));
        }
        Ok(Self {
            h_atom,
            current,
            omega,
        })
    }

    /// Two-level atom with `H_ato = (ω_A/2) σ_z` and `J = g σ_-`, mode frequency
    /// `ω = ω_A + detuning`. Level 0 is the excited state `|e>`, level 1 the
    /// ground state `|g>`.
    pub fn two_level(g: f64, detuning: f64, atom_frequency: f64) -> Result<Self> {
        let half = 0.5 * atom_frequency;
        let h = CMatrix::from_row_slice(2, 2, &[re(half), re(0.0), re(0.0), re(-half)]);
        // σ_- = |g><e|
        let j = CMatrix::from_row_slice(2, 2, &[re(0.0), re(0.0), re(g), re(0.0)]);
        Self::new(h, j, atom_frequency + detuning)
    }

    pub fn atom_dim(&self) -> usize {
        self.h_atom.nrows()
    }

    pub fn h_atom(&self) -> &CMatrix {
        &self.h_atom
    }

    pub fn current(&self) -> &CMatrix {
        &self.current
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The rotated current `j(t)`.
    pub fn rotated_current(&self, t: f64) -> CMatrix {
        rotated_current(self, t)
    }
}

/// `j(t) = e^{iωt} e^{iH_ato t} J e^{-iH_ato t}`, exponentials by eigendecomposition.
pub fn rotated_current(model: &AtomFieldModel, t: f64) -> CMatrix {
    if t == 0.0 {
        return model.current.clone();
    }
    let u = hermitian_unitary(&model.h_atom, t);
    let phase = C64::from_polar(1.0, model.omega * t);
    &u * &model.current * u.adjoint() * phase
}

/// `H_I(t) = j(t) ⊗ a† + j†(t) ⊗ a` on `space`.
pub fn interaction_hamiltonian(model: &AtomFieldModel, t: f64, space: CompositeSpace) -> Result<CMatrix> {
    if space.atom_dim() != model.atom_dim() {
        return Err(mismatch(model.atom_dim(), space.atom_dim()));
    }
    let j = rotated_current(model, t);
    let a = space.fock().annihilation();
    let ad = a.adjoint();
    Ok(tensor(&j, &ad) + tensor(&j.adjoint(), &a))
}

/// `Ψ0 = ψ_ato ⊗ φ_field`.
pub fn product_initial_state(psi_atom: &CVector, field: &CVector, space: CompositeSpace) -> Result<CompositeState> {
    if psi_atom.len() != space.atom_dim() {
        return Err(mismatch(space.atom_dim(), psi_atom.len()));
    }
    if field.len() != space.field_dim() {
        return Err(mismatch(space.field_dim(), field.len()));
    }
    for (what, v) in [("atomic state", psi_atom), ("field state", field)] {
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { what, norm });
        }
    }
    let amplitudes = CVector::from_iterator(
        space.total_dim(),
        psi_atom.iter().flat_map(|&x| field.iter().map(move |&y| x * y)),
    );
    let norm = amplitudes.norm();
    // Renormalize away the sub-1e-10 slack allowed on the factors.
    CompositeState::new(space, amplitudes / re(norm))
}

/// `ρ = Ψ Ψ†`.
pub fn density_operator(state: &CompositeState) -> CMatrix {
    let psi = state.amplitudes();
    psi * psi.adjoint()
}

/// Uniform time stepping with output every `sample_stride` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub sample_stride: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64, sample_stride: usize) -> Result<Self> {
        let grid = Self {
            t_start,
            t_end,
            dt,
            sample_stride,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// The largest step not exceeding `max_dt` that divides `[t_start, t_end]` evenly.
    pub fn covering(t_start: f64, t_end: f64, max_dt: f64, sample_stride: usize) -> Result<Self> {
        if !(max_dt > 0.0) || !(t_end > t_start) {
            return Err(Error::InvalidParameter(format!(
                "time grid needs dt > 0 and t_end > t_start (got dt={max_dt}, [{t_start}, {t_end}])"
            )));
        }
        let steps = ((t_end - t_start) / max_dt * (1.0 - 1e-12)).ceil().max(1.0);
        Self::new(t_start, t_end, (t_end - t_start) / steps, sample_stride)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.dt.is_finite()) {
            return Err(Error::InvalidParameter("non-finite time grid".into()));
        }
        if self.dt <= 0.0 || self.t_end <= self.t_start || self.sample_stride == 0 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs dt > 0, t_end > t_start and stride >= 1 (got {self:?})"
            )));
        }
        let ratio = (self.t_end - self.t_start) / self.dt;
        if (ratio - ratio.round()).abs() > 1e-6 * ratio.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "(t_end - t_start) / dt = {ratio} is not an integer"
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt).round() as usize
    }

    pub fn time(&self, step: usize) -> f64 {
        self.t_start + step as f64 * self.dt
    }

    /// Step indices at which output is recorded, always including the first and last.
    pub fn sample_steps(&self) -> Vec<usize> {
        let n = self.steps();
        let mut out: Vec<usize> = (0..=n).step_by(self.sample_stride).collect();
        if out.last() != Some(&n) {
            out.push(n);
        }
        out
    }
}

/// States recorded along a run.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &S)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// RK4 integration of `dΨ/dt = -i H_I(t) Ψ` over `grid`.
pub fn evolve_unitary(model: &AtomFieldModel, psi0: &CompositeState, grid: &TimeGrid) -> Result<Trajectory<CompositeState>> {
    grid.validate()?;
    let space = psi0.space();
    let h0 = interaction_hamiltonian(model, grid.t_start, space)?;
    let step_norm = grid.dt * spectral_norm_estimate(&h0, 20);
    if step_norm > MAX_STEP_NORM {
        return Err(Error::StepTooLarge {
            value: step_norm,
            limit: MAX_STEP_NORM,
        });
    }

    let minus_i = c(0.0, -1.0);
    let rhs = |t: f64, psi: &CVector| -> Result<CVector> {
        Ok(interaction_hamiltonian(model, t, space)? * psi * minus_i)
    };

    let samples = grid.sample_steps();
    let mut trajectory = Trajectory {
        times: Vec::with_capacity(samples.len()),
        states: Vec::with_capacity(samples.len()),
    };
    let mut psi = psi0.amplitudes().clone();
    let mut next_sample = samples.iter().peekable();
    for step in 0..=grid.steps() {
        if next_sample.peek() == Some(&&step) {
            next_sample.next();
            let drift = (psi.norm() - 1.0).abs();
            if drift > MAX_NORM_DRIFT {
                return Err(Error::NormDrift {
                    drift,
                    limit: MAX_NORM_DRIFT,
                });
            }
            trajectory.times.push(grid.time(step));
            trajectory.states.push(CompositeState::from_evolved(space, psi.clone()));
        }
        if step < grid.steps() {
            psi = rk4_step(rhs, grid.time(step), &psi, grid.dt)?;
        }
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::FockBasis;
    use crate::linalg::max_abs;
    use std::f64::consts::PI;

    fn space(n_max: usize) -> CompositeSpace {
        CompositeSpace::new(2, FockBasis::new(n_max).unwrap()).unwrap()
    }

    fn excited() -> CVector {
        CVector::from_vec(vec![re(1.0), re(0.0)])
    }

    #[test]
    fn rotated_current_at_zero_is_bare_current() {
        let m = AtomFieldModel::two_level(0.7, 0.3, 2.0).unwrap();
        assert!(max_abs(&(rotated_current(&m, 0.0) - m.current())) < 1e-15);
    }

    #[test]
    fn detuned_current_picks_up_detuning_phase() {
        let (g, wa, delta) = (0.8, 3.0, 0.45);
        let m = AtomFieldModel::two_level(g, delta, wa).unwrap();
        for &t in &[0.3, 1.7, 4.2] {
            let j = rotated_current(&m, t);
            let expected = C64::from_polar(g, delta * t);
            assert!((j[(1, 0)] - expected).norm() < 1e-12);
            assert!(j[(0, 0)].norm() + j[(0, 1)].norm() + j[(1, 1)].norm() < 1e-12);
        }
        let resonant = AtomFieldModel::two_level(g, 0.0, wa).unwrap();
        assert!(max_abs(&(rotated_current(&resonant, 2.5) - resonant.current())) < 1e-12);
    }

    #[test]
    fn interaction_hamiltonian_structure() {
        let sp = space(4);
        let m = AtomFieldModel::two_level(1.3, 0.2, 1.0).unwrap();
        let h = interaction_hamiltonian(&m, 0.9, sp).unwrap();
        assert!(hermitian_deviation(&h) < 1e-14);

        let resonant = AtomFieldModel::two_level(1.3, 0.0, 1.0).unwrap();
        let h = interaction_hamiltonian(&resonant, 0.9, sp).unwrap();
        // <e,0| H_I |g,1> = g
        assert!((h[(sp.index(0, 0), sp.index(1, 1))] - re(1.3)).norm() < 1e-12);

        let zero = AtomFieldModel::new(CMatrix::identity(2, 2), CMatrix::zeros(2, 2), 1.0).unwrap();
        assert!(max_abs(&interaction_hamiltonian(&zero, 0.4, sp).unwrap()) == 0.0);

        let wrong = CompositeSpace::new(3, FockBasis::new(4).unwrap()).unwrap();
        assert!(interaction_hamiltonian(&m, 0.0, wrong).is_err());
    }

    #[test]
    fn model_validation() {
        let h = CMatrix::from_row_slice(2, 2, &[re(0.0), c(0.0, 1.0), c(0.0, 1.0), re(0.0)]);
        assert!(matches!(
            AtomFieldModel::new(h, CMatrix::zeros(2, 2), 1.0),
            Err(Error::NotHermitian { .. })
        ));
        assert!(AtomFieldModel::new(CMatrix::zeros(2, 2), CMatrix::zeros(3, 3), 1.0).is_err());
        assert!(AtomFieldModel::two_level(1.0, -5.0, 1.0).is_err());
    }

    #[test]
    fn product_states() {
        let sp = space(3);
        let vac = sp.fock().fock_state(0).unwrap();
        let psi = product_initial_state(&excited(), &vac, sp).unwrap();
        assert_eq!(psi.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(psi.amplitude(0, 0), re(1.0));

        let bad = CVector::from_vec(vec![re(1.0), re(1.0)]);
        assert!(matches!(
            product_initial_state(&bad, &vac, sp),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn coherent_field_amplitudes() {
        let sp = space(12);
        let alpha = c(0.6, 0.3);
        let field = sp.fock().coherent_state(alpha);
        let psi = product_initial_state(&excited(), &field, sp).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        // amplitudes proportional to alpha^n / sqrt(n!)
        let mut expected = Vec::new();
        let mut term = re(1.0);
        for n in 0..13 {
            if n > 0 {
                term *= alpha / (n as f64).sqrt();
            }
            expected.push(term);
        }
        let norm: f64 = expected.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (n, e) in expected.iter().enumerate() {
            assert!((psi.amplitude(0, n) - e / norm).norm() < 1e-14);
        }
    }

    #[test]
    fn density_operator_is_pure() {
        let sp = space(3);
        let field = sp.fock().coherent_state(c(0.4, 0.1));
        let atom = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let rho = density_operator(&product_initial_state(&atom, &field, sp).unwrap());
        assert!((crate::linalg::trace(&rho) - re(1.0)).norm() < 1e-14);
        assert!(max_abs(&(&rho * &rho - &rho)) < 1e-12);

        let basis_state = product_initial_state(&excited(), &sp.fock().fock_state(1).unwrap(), sp).unwrap();
        let rho = density_operator(&basis_state);
        assert_eq!(rho[(1, 1)], re(1.0));
        assert_eq!(rho.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn free_model_does_not_move() {
        let sp = space(3);
        let m = AtomFieldModel::new(CMatrix::identity(2, 2), CMatrix::zeros(2, 2), 2.0).unwrap();
        let psi0 = product_initial_state(&excited(), &sp.fock().coherent_state(c(0.3, 0.0)), sp).unwrap();
        let traj = evolve_unitary(&m, &psi0, &TimeGrid::new(0.0, 1.0, 0.01, 10).unwrap()).unwrap();
        for (_, s) in traj.iter() {
            assert!((s.amplitudes() - psi0.amplitudes()).norm() < 1e-15);
        }
    }

    #[test]
    fn vacuum_rabi_against_closed_form() {
        let g = 1.0;
        let sp = space(4);
        let m = AtomFieldModel::two_level(g, 0.0, 1.0).unwrap();
        let psi0 = product_initial_state(&excited(), &sp.fock().fock_state(0).unwrap(), sp).unwrap();
        let grid = TimeGrid::new(0.0, 2.0 * PI, 2.0 * PI / 6000.0, 100).unwrap();
        let traj = evolve_unitary(&m, &psi0, &grid).unwrap();
        assert_eq!(traj.len(), 61);
        for (t, s) in traj.iter() {
            assert!((s.atomic_population(0) - (g * t).cos().powi(2)).abs() < 1e-8);
            assert!((s.photon_number() - (g * t).sin().powi(2)).abs() < 1e-8);
            assert!((s.norm() - 1.0).abs() < 1e-9);
            assert!(s.top_level_weight() < 1e-10);
        }
    }

    #[test]
    fn step_guard_and_grid_validation() {
        let sp = space(4);
        let m = AtomFieldModel::two_level(1.0, 0.0, 1.0).unwrap();
        let psi0 = product_initial_state(&excited(), &sp.fock().fock_state(0).unwrap(), sp).unwrap();
        let coarse = TimeGrid::new(0.0, 1.0, 0.5, 1).unwrap();
        assert!(matches!(evolve_unitary(&m, &psi0, &coarse), Err(Error::StepTooLarge { .. })));
        assert!(TimeGrid::new(0.0, 1.0, 0.3, 1).is_err());
        assert!(TimeGrid::new(1.0, 0.0, 0.1, 1).is_err());
        assert_eq!(TimeGrid::new(0.0, 1.0, 0.1, 3).unwrap().sample_steps(), vec![0, 3, 6, 9, 10]);
    }
}
