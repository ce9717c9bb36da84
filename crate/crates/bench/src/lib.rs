//! Shared fixtures for the criterion benches.

use swe_core::fockspace::CompositeSpace;
use swe_core::unitary::product_initial_state;
use swe_core::{AtomFieldModel, CVector, Complex64, CompositeState, FockBasis, Result};

/// Two-level atom at resonance with the field in a coherent state.
pub fn coherent_scenario(n_max: usize, alpha: f64) -> Result<(AtomFieldModel, CompositeState)> {
    let basis = FockBasis::new(n_max)?;
    let space = CompositeSpace::new(2, basis)?;
    let atom = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let field = basis.coherent_state(Complex64::new(alpha, 0.0));
    Ok((AtomFieldModel::two_level(1.0, 0.0, 1.0)?, product_initial_state(&atom, &field, space)?))
}
