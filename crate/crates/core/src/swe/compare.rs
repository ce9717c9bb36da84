//! Node-wise comparison of a semiclassical wave against the unitary oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::wave::{evaluate_on_grid, swe_expectation, wave_density, SemiclassicalWave, WaveRepresentation};
use crate::error::{mismatch, Result};
use crate::fockspace::CompositeState;
use crate::output::to_json_17;
use crate::phasespace::{coarse_grain, husimi_density, symmetric_moment_oracle, PhaseGrid, SemiclassicalObservable};
use crate::unitary::density_operator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentDelta {
    /// `[re, im]`
    pub swe: [f64; 2],
    pub oracle: [f64; 2],
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub time: f64,
    pub linf: f64,
    pub l2: f64,
    /// Largest node entry of the oracle's Husimi density.
    pub max_value: f64,
    pub moments: BTreeMap<String, MomentDelta>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(to_json_17(self)?)
    }
}

/// The observables reported by [`compare_to_oracle`].
pub fn report_observables() -> Vec<(&'static str, SemiclassicalObservable)> {
    vec![
        ("one", SemiclassicalObservable::one()),
        ("a", SemiclassicalObservable::a()),
        ("a_conj", SemiclassicalObservable::a_conj()),
        ("abs_a_sq", SemiclassicalObservable::abs_sq()),
    ]
}

/// Compares `ψψ†` with the Husimi operator density of `psi` on `grid`, and
/// the quadrature moments of the wave with the operator traces of the
/// coarse-grained observables.
pub fn compare_to_oracle(wave: &SemiclassicalWave, psi: &CompositeState, grid: &PhaseGrid) -> Result<ComparisonReport> {
    let space = psi.space();
    if wave.atom_dim() != space.atom_dim() {
        return Err(mismatch(space.atom_dim(), wave.atom_dim()));
    }
    let on_grid;
    let wave = match wave.representation() {
        WaveRepresentation::Bargmann => {
            on_grid = evaluate_on_grid(wave, grid)?;
            &on_grid
        }
        WaveRepresentation::Grid => {
            if wave.grid() != Some(grid) {
                return Err(mismatch(format!("{grid:?}"), format!("{:?}", wave.grid())));
            }
            wave
        }
    };
    let rho = density_operator(psi);
    let oracle = husimi_density(&rho, space, grid)?;
    let swe = wave_density(wave)?;

    let mut moments = BTreeMap::new();
    for (name, obs) in report_observables() {
        let s = swe_expectation(wave, &obs)?;
        let o = symmetric_moment_oracle(&coarse_grain(&obs, grid)?, &rho, space.fock())?;
        moments.insert(
            name.to_string(),
            MomentDelta {
                swe: [s.re, s.im],
                oracle: [o.re, o.im],
                delta: (s - o).norm(),
            },
        );
    }
    Ok(ComparisonReport {
        time: wave.time(),
        linf: swe.linf_distance(&oracle)?,
        l2: swe.l2_distance(&oracle)?,
        max_value: oracle.max_entry(),
        moments,
    })
}
