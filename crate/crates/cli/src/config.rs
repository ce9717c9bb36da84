//! Scenario configuration: one JSON document, with model presets expanded
//! into explicit matrices before validation.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use swe_core::fockspace::CompositeSpace;
use swe_core::swe::DerivativeScheme;
use swe_core::unitary::product_initial_state;
use swe_core::{AtomFieldModel, CMatrix, CVector, Complex64, CompositeState, FockBasis, PhaseGrid, TimeGrid};

/// Complex number as `[re, im]`.
pub type ComplexSpec = [f64; 2];
/// Row-major complex matrix.
pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "two-level")]
    TwoLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetModel {
    pub preset: Preset,
    pub g: f64,
    pub detuning: f64,
    #[serde(default = "one")]
    pub atom_frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModel {
    pub atom_dim: usize,
    pub h_atom: MatrixSpec,
    pub current: MatrixSpec,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Preset(PresetModel),
    Explicit(ExplicitModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Vacuum,
    Fock(usize),
    Coherent(ComplexSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// Atomic amplitudes; level 0 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<Vec<ComplexSpec>>,
    #[serde(default = "vacuum")]
    pub field: FieldSpec,
}

impl Default for InitialSpec {
    fn default() -> Self {
        Self {
            atom: None,
            field: FieldSpec::Vacuum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockSpec {
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub extent: f64,
    #[serde(rename = "M")]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_end: f64,
    /// Largest step; the run uses the nearest step that divides `t_end` evenly.
    pub dt: f64,
    pub sample_stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Bargmann,
    Grid,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Bargmann => "bargmann",
            Backend::Grid => "grid",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bargmann" => Ok(Backend::Bargmann),
            "grid" => Ok(Backend::Grid),
            other => bail!("unknown backend {other:?} (expected bargmann or grid)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    pub fock: FockSpec,
    /// Grid for phase-space fields and oracle comparisons.
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    /// Grid on which the grid backend integrates the wave equation.
    #[serde(default = "default_swe_grid")]
    pub swe_grid: GridSpec,
    pub time: TimeSpec,
    #[serde(default)]
    pub swe_backend: Backend,
    #[serde(default)]
    pub derivative: DerivativeScheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn one() -> f64 {
    1.0
}

fn vacuum() -> FieldSpec {
    FieldSpec::Vacuum
}

fn default_grid() -> GridSpec {
    GridSpec {
        extent: PhaseGrid::DEFAULT_EXTENT,
        points: PhaseGrid::DEFAULT_POINTS,
    }
}

fn default_swe_grid() -> GridSpec {
    GridSpec { extent: 8.0, points: 128 }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for ScenarioConfig {
    /// Resonant vacuum-Rabi scenario over one period.
    fn default() -> Self {
        Self {
            model: ModelSpec::Preset(PresetModel {
                preset: Preset::TwoLevel,
                g: 1.0,
                detuning: 0.0,
                atom_frequency: 1.0,
            }),
            initial: InitialSpec::default(),
            fock: FockSpec { n_max: 8 },
            grid: default_grid(),
            swe_grid: default_swe_grid(),
            time: TimeSpec {
                t_end: 2.0 * PI,
                dt: 1e-3,
                sample_stride: 250,
            },
            swe_backend: Backend::Bargmann,
            derivative: DerivativeScheme::Spectral,
            sampling: None,
            output_dir: default_output_dir(),
        }
    }
}

fn complex(z: ComplexSpec) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn to_spec(m: &CMatrix) -> MatrixSpec {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn to_matrix(name: &str, entries: &MatrixSpec, dim: usize) -> Result<CMatrix> {
    ensure!(
        entries.len() == dim && entries.iter().all(|row| row.len() == dim),
        "{name} must be a {dim}x{dim} matrix of [re, im] pairs"
    );
    Ok(CMatrix::from_fn(dim, dim, |i, j| complex(entries[i][j])))
}

fn finite(name: &str, x: f64) -> Result<()> {
    ensure!(x.is_finite(), "{name} must be finite (got {x})");
    Ok(())
}

impl ModelSpec {
    /// Explicit matrices for this model, expanding presets.
    pub fn expand(&self) -> Result<ExplicitModel> {
        match self {
            ModelSpec::Explicit(m) => Ok(m.clone()),
            ModelSpec::Preset(p) => {
                for (name, x) in [("g", p.g), ("detuning", p.detuning), ("atom_frequency", p.atom_frequency)] {
                    finite(name, x)?;
                }
                let model = AtomFieldModel::two_level(p.g, p.detuning, p.atom_frequency)?;
                Ok(ExplicitModel {
                    atom_dim: 2,
                    h_atom: to_spec(model.h_atom()),
                    current: to_spec(model.current()),
                    omega: model.omega(),
                })
            }
        }
    }
}

/// A validated scenario ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: AtomFieldModel,
    pub explicit: ExplicitModel,
    pub space: CompositeSpace,
    pub initial: CompositeState,
    pub atom_state: CVector,
    pub vacuum_field: bool,
    pub grid: PhaseGrid,
    pub swe_grid: PhaseGrid,
    pub times: TimeGrid,
    pub backend: Backend,
    pub derivative: DerivativeScheme,
    pub sampling: SamplingSpec,
    pub output_dir: PathBuf,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid scenario configuration")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Expands presets, then checks every field and builds the solver inputs.
    pub fn resolve(&self) -> Result<Scenario> {
        let explicit = self.model.expand()?;
        let d = explicit.atom_dim;
        ensure!(d >= 1, "atom_dim must be at least 1");
        for row in explicit.h_atom.iter().chain(&explicit.current).flatten() {
            finite("matrix entry", row[0])?;
            finite("matrix entry", row[1])?;
        }
        finite("omega", explicit.omega)?;
        let model = AtomFieldModel::new(
            to_matrix("h_atom", &explicit.h_atom, d)?,
            to_matrix("current", &explicit.current, d)?,
            explicit.omega,
        )
        .context("invalid model")?;

        let basis = FockBasis::new(self.fock.n_max)?;
        let space = CompositeSpace::new(d, basis)?;

        let atom_state = match &self.initial.atom {
            None => CVector::from_fn(d, |i, _| Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)),
            Some(v) => {
                ensure!(v.len() == d, "initial.atom needs {d} amplitudes, got {}", v.len());
                for z in v {
                    finite("initial.atom", z[0])?;
                    finite("initial.atom", z[1])?;
                }
                CVector::from_iterator(d, v.iter().map(|&z| complex(z)))
            }
        };
        let field = match &self.initial.field {
            FieldSpec::Vacuum => basis.fock_state(0)?,
            FieldSpec::Fock(n) => basis.fock_state(*n)?,
            FieldSpec::Coherent(alpha) => {
                finite("initial.field.coherent", alpha[0])?;
                finite("initial.field.coherent", alpha[1])?;
                basis.coherent_state(complex(*alpha))
            }
        };
        let initial = product_initial_state(&atom_state, &field, space).context("invalid initial state")?;

        for (name, g) in [("grid", self.grid), ("swe_grid", self.swe_grid)] {
            finite(&format!("{name}.L"), g.extent)?;
        }
        let grid = PhaseGrid::new(self.grid.extent, self.grid.points).context("invalid grid")?;
        let swe_grid = PhaseGrid::new(self.swe_grid.extent, self.swe_grid.points).context("invalid swe_grid")?;

        finite("time.t_end", self.time.t_end)?;
        finite("time.dt", self.time.dt)?;
        let times = TimeGrid::covering(0.0, self.time.t_end, self.time.dt, self.time.sample_stride)
            .context("invalid time grid")?;

        let sampling = self.sampling.unwrap_or(SamplingSpec {
            count: 10_000,
            seed: 0,
        });
        ensure!(sampling.count > 0, "sampling.count must be positive");

        Ok(Scenario {
            model,
            explicit,
            space,
            initial,
            atom_state,
            vacuum_field: self.initial.field == FieldSpec::Vacuum,
            grid,
            swe_grid,
            times,
            backend: self.swe_backend,
            derivative: self.derivative,
            sampling,
            output_dir: self.output_dir.clone(),
        })
    }
}
