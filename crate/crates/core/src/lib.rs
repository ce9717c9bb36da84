//! Semiclassical wave equation for an atom coupled to a single cavity mode.
//!
//! The cavity field is carried by a classical complex variable `a` while the
//! atom stays quantum: the state is an atomic vector `ψ(a, a*)` over phase
//! space whose outer product equals the Husimi-smoothed joint density. The
//! crate provides
//!
//! * [`fockspace`]: truncated Fock algebra and symmetric-product superoperators,
//! * [`unitary`]: the interaction-picture Schrödinger solver used as reference,
//! * [`phasespace`]: Wigner/Husimi transforms, coarse-graining and moment identities,
//! * [`swe`]: the semiclassical wave equation with a Bargmann-coefficient and a
//!   phase-space-grid backend, field sampling and comparison against the reference.

pub mod error;
pub mod fockspace;
pub mod linalg;
pub mod output;
pub mod phasespace;
pub mod rk4;
pub mod swe;
pub mod unitary;

pub use error::{Error, Result};
pub use fockspace::{CompositeSpace, CompositeState, FockBasis};
pub use linalg::{CMatrix, CVector};
pub use phasespace::{OperatorPhaseField, PhaseFunction, PhaseGrid, PhaseKind, SemiclassicalObservable};
pub use swe::{SemiclassicalWave, WaveRepresentation};
pub use unitary::{AtomFieldModel, TimeGrid, Trajectory};

pub use num_complex::Complex64;
