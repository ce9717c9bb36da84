//! Scenario runner: configuration, the `rabi`, `phasespace`, `sample` and
//! `verify` pipelines, and their CSV/JSON artifacts.

pub mod commands;
pub mod config;
pub mod verify;

pub use commands::{phasespace, rabi, sample, write_rabi, FieldKind, RabiRecord, RabiReport, SampleReport};
pub use config::{Backend, Scenario, ScenarioConfig};
pub use verify::{run_verify, IdentityCheck, VerifyOptions};
