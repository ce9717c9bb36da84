//! Quasi-probability tooling for the cavity mode: characteristic functions,
//! Wigner transforms, minimum coarse-graining, Husimi densities and the
//! moment identities linking phase-space averages to operator traces.

pub mod characteristic;
pub mod coarse;
pub mod fft;
pub mod field;
pub mod grid;
pub mod husimi;
pub mod io;
pub mod moments;
pub mod observable;
pub mod wigner;

pub use characteristic::{
    characteristic_function, displacement_elements, exact_characteristic, superop_characteristic_function,
    CharacteristicSample,
};
pub use coarse::{coarse_grain, CoarseGrain, GaussianKernel};
pub use field::{OperatorPhaseField, PhaseFunction, PhaseKind};
pub use grid::PhaseGrid;
pub use husimi::{coherent_truncation_deficit, flagged_nodes, husimi, husimi_density};
pub use moments::{photon_number_from_husimi, semiclassical_expectation, symmetric_moment_oracle, PhaseDensity};
pub use observable::{FieldSymbol, Polynomial, SemiclassicalObservable};
pub use wigner::{sharp_density, wigner};
