//! The semiclassical wave equation in Bargmann coefficients.
//!
//! With `ψ(a) = e^{-|a|²/2} π^{-1/2} ∑ F_n (a*)^n / sqrt(n!)`, multiplication by
//! `a*` raises `n` and `a/2 + ∂/∂a*` lowers it, so the equation becomes
//! `i dF_n/dt = sqrt(n) j(t) F_{n-1} + sqrt(n+1) j†(t) F_{n+1}`.

use num_complex::Complex64 as C64;

use super::wave::SemiclassicalWave;
use crate::error::{mismatch, Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::rk4::rk4_step;
use crate::unitary::{rotated_current, AtomFieldModel, TimeGrid, Trajectory};

/// Largest weight allowed in the top coefficient before the truncation is
/// considered overrun.
pub const MAX_TOP_WEIGHT: f64 = 1e-8;

fn rhs(j: &CMatrix, jd: &CMatrix, f: &[CVector]) -> Vec<CVector> {
    let top = f.len() - 1;
    let minus_i = C64::new(0.0, -1.0);
    (0..=top)
        .map(|n| {
            let mut out = CVector::zeros(f[n].len());
            if n > 0 {
                out += j * &f[n - 1] * C64::new((n as f64).sqrt(), 0.0);
            }
            if n < top {
                out += jd * &f[n + 1] * C64::new(((n + 1) as f64).sqrt(), 0.0);
            }
            out * minus_i
        })
        .collect()
}

fn check_model(model: &AtomFieldModel, wave: &SemiclassicalWave) -> Result<()> {
    if model.atom_dim() != wave.atom_dim() {
        return Err(mismatch(model.atom_dim(), wave.atom_dim()));
    }
    Ok(())
}

fn top_weight(f: &[CVector]) -> f64 {
    f.last().map_or(0.0, |v| v.norm_squared())
}

/// Advances a Bargmann wave by one RK4 step from `t` to `t + dt`.
pub fn step_bargmann(model: &AtomFieldModel, wave: &SemiclassicalWave, t: f64, dt: f64) -> Result<SemiclassicalWave> {
    check_model(model, wave)?;
    let coefficients = wave
        .coefficients()
        .ok_or(Error::Representation { expected: "bargmann" })?
        .to_vec();
    let next = rk4_step(
        |s, f: &Vec<CVector>| -> Result<Vec<CVector>> {
            let j = rotated_current(model, s);
            let jd = j.adjoint();
            Ok(rhs(&j, &jd, f))
        },
        t,
        &coefficients,
        dt,
    )?;
    let weight = top_weight(&next);
    if weight > MAX_TOP_WEIGHT {
        return Err(Error::TruncationOverflow {
            weight,
            limit: MAX_TOP_WEIGHT,
        });
    }
    let mut out = wave.clone();
    *out.coefficients_mut().expect("bargmann wave") = next;
    out.set_time(t + dt);
    Ok(out)
}

/// Integrates a Bargmann wave over `grid`, recording every `sample_stride` steps.
pub fn evolve_bargmann(
    model: &AtomFieldModel,
    wave: &SemiclassicalWave,
    grid: &TimeGrid,
) -> Result<Trajectory<SemiclassicalWave>> {
    grid.validate()?;
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
            current = step_bargmann(model, &current, grid.time(step), grid.dt)?;
            current.set_time(grid.time(step + 1));
        }
    }
    Ok(trajectory)
}
