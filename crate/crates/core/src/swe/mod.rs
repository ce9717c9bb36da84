//! The semiclassical wave equation for the atom driven by a classical field
//! variable `a`, with a Bargmann-coefficient backend and an independent
//! phase-space grid backend.

pub mod bargmann;
pub mod compare;
pub mod gridstep;
pub mod sampling;
pub mod wave;

pub use bargmann::{evolve_bargmann, step_bargmann};
pub use compare::{compare_to_oracle, ComparisonReport, MomentDelta};
pub use gridstep::{step_grid, DerivativeScheme, GridSolver};
pub use sampling::{sample_field, NodeSampler};
pub use wave::{
    conditional_state, evaluate_on_grid, field_density, initial_wave, project_to_bargmann, swe_expectation,
    wave_density, write_wave_csv, FieldSample, SemiclassicalWave, Support, WaveRepresentation,
};
