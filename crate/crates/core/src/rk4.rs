//! Classical fixed-step fourth-order Runge-Kutta shared by all three solvers.

use num_complex::Complex64 as C64;

use crate::linalg::CVector;

/// Minimal vector-space structure the integrator needs.
pub trait OdeState: Clone {
    /// `self += factor * other`
    fn add_scaled(&mut self, factor: f64, other: &Self);
}

impl OdeState for CVector {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        self.axpy(C64::new(factor, 0.0), other, C64::new(1.0, 0.0));
    }
}

impl OdeState for Vec<C64> {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        for (y, x) in self.iter_mut().zip(other) {
            *y += x * factor;
        }
    }
}

impl OdeState for Vec<CVector> {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        for (y, x) in self.iter_mut().zip(other) {
            y.add_scaled(factor, x);
        }
    }
}

impl OdeState for Vec<Vec<C64>> {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        for (y, x) in self.iter_mut().zip(other) {
            y.add_scaled(factor, x);
        }
    }
}

/// One RK4 step of `dy/dt = rhs(t, y)`.
pub fn rk4_step<S, F, E>(mut rhs: F, t: f64, y: &S, dt: f64) -> Result<S, E>
where
    S: OdeState,
    F: FnMut(f64, &S) -> Result<S, E>,
{
    let k1 = rhs(t, y)?;
    let mut y2 = y.clone();
    y2.add_scaled(0.5 * dt, &k1);
    let k2 = rhs(t + 0.5 * dt, &y2)?;
    let mut y3 = y.clone();
    y3.add_scaled(0.5 * dt, &k2);
    let k3 = rhs(t + 0.5 * dt, &y3)?;
    let mut y4 = y.clone();
    y4.add_scaled(dt, &k3);
    let k4 = rhs(t + dt, &y4)?;

    let mut next = y.clone();
    next.add_scaled(dt / 6.0, &k1);
    next.add_scaled(dt / 3.0, &k2);
    next.add_scaled(dt / 3.0, &k3);
    next.add_scaled(dt / 6.0, &k4);
    Ok(next)
}
