use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::info;
use serde::Serialize;
use swe_core::fockspace::partial_trace_atom;
use swe_core::output::{csv_float, to_json_17};
use swe_core::phasespace::io::write_phase_function;
use swe_core::phasespace::{husimi, wigner};
use swe_core::swe::{
    compare_to_oracle, evaluate_on_grid, evolve_bargmann, field_density, initial_wave, sample_field, swe_expectation,
    GridSolver, Support,
};
use swe_core::unitary::{density_operator, evolve_unitary};
use swe_core::{
    CMatrix, Complex64, CompositeState, PhaseGrid, SemiclassicalObservable, SemiclassicalWave, TimeGrid,
    Trajectory, WaveRepresentation,
};

use crate::config::{Backend, ExplicitModel, Scenario, ScenarioConfig};

/// Time grid from 0 to `t` with the scenario's step bound, sampling only the end.
fn grid_to(s: &Scenario, t: f64) -> Result<TimeGrid> {
    Ok(TimeGrid::covering(0.0, t, s.times.dt, usize::MAX)?)
}

fn initial_wave_for(s: &Scenario) -> Result<SemiclassicalWave> {
    let bargmann = SemiclassicalWave::from_composite(&s.initial, 0.0);
    Ok(match s.backend {
        Backend::Bargmann => bargmann,
        Backend::Grid if s.vacuum_field => initial_wave(&s.atom_state, Support::Grid(s.swe_grid))?,
        Backend::Grid => evaluate_on_grid(&bargmann, &s.swe_grid)?,
    })
}

/// Runs the selected wave-equation backend.
pub fn swe_run(s: &Scenario, times: &TimeGrid) -> Result<Trajectory<SemiclassicalWave>> {
    let w0 = initial_wave_for(s)?;
    let run = match s.backend {
        Backend::Bargmann => evolve_bargmann(&s.model, &w0, times),
        Backend::Grid => GridSolver::new(s.swe_grid, s.derivative).evolve(&s.model, &w0, times),
    };
    run.with_context(|| {
        format!(
            "{} backend, t_end = {}, dt = {}",
            s.backend.name(),
            times.t_end,
            times.dt
        )
    })
}

pub fn oracle_run(s: &Scenario, times: &TimeGrid) -> Result<Trajectory<CompositeState>> {
    evolve_unitary(&s.model, &s.initial, times)
        .with_context(|| format!("unitary reference, t_end = {}, dt = {}", times.t_end, times.dt))
}

/// Grid on which a wave is compared with the reference.
pub fn comparison_grid(s: &Scenario, wave: &SemiclassicalWave) -> PhaseGrid {
    wave.grid().copied().unwrap_or(s.grid)
}

/// The wave sampled on a grid: grid waves as they are, Bargmann waves on the scenario grid.
pub fn on_grid(s: &Scenario, wave: &SemiclassicalWave) -> Result<SemiclassicalWave> {
    Ok(match wave.representation() {
        WaveRepresentation::Grid => wave.clone(),
        WaveRepresentation::Bargmann => evaluate_on_grid(wave, &s.grid)?,
    })
}

pub fn level_projector(d: usize, level: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| Complex64::new(if i == level && j == level { 1.0 } else { 0.0 }, 0.0))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RabiRecord {
    pub t: f64,
    pub p_e_oracle: f64,
    pub p_e_swe: f64,
    pub n_oracle: f64,
    pub n_swe_via_eq19: f64,
    pub linf_husimi: f64,
    pub l2_husimi: f64,
    pub max_husimi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RabiSummary {
    pub max_p_e_delta: f64,
    pub max_n_delta: f64,
    pub max_linf_husimi: f64,
    pub max_relative_linf_husimi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RabiReport {
    pub command: &'static str,
    pub backend: &'static str,
    pub config: ScenarioConfig,
    pub model: ExplicitModel,
    pub dt: f64,
    pub steps: usize,
    pub records: Vec<RabiRecord>,
    pub summary: RabiSummary,
}

/// Oracle and wave equation side by side at every sample time.
pub fn rabi(config: &ScenarioConfig) -> Result<RabiReport> {
    let s = config.resolve()?;
    info!("rabi: {} backend, {} steps", s.backend.name(), s.times.steps());
    let oracle = oracle_run(&s, &s.times)?;
    let swe = swe_run(&s, &s.times)?;
    let d = s.space.atom_dim();
    let pe = SemiclassicalObservable::atomic_operator(level_projector(d, 0));
    let mut records = Vec::with_capacity(oracle.len());
    for ((&t, psi), wave) in oracle.times.iter().zip(&oracle.states).zip(&swe.states) {
        let sampled = on_grid(&s, wave)?;
        let cmp = compare_to_oracle(wave, psi, &comparison_grid(&s, wave))
            .with_context(|| format!("comparison at t = {t}"))?;
        records.push(RabiRecord {
            t,
            p_e_oracle: psi.atomic_population(0),
            p_e_swe: swe_expectation(&sampled, &pe)?.re,
            n_oracle: psi.photon_number(),
            n_swe_via_eq19: swe_expectation(&sampled, &SemiclassicalObservable::abs_sq())?.re - 1.0,
            linf_husimi: cmp.linf,
            l2_husimi: cmp.l2,
            max_husimi: cmp.max_value,
        });
    }
    let fold = |f: &dyn Fn(&RabiRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
    let summary = RabiSummary {
        max_p_e_delta: fold(&|r| (r.p_e_swe - r.p_e_oracle).abs()),
        max_n_delta: fold(&|r| (r.n_swe_via_eq19 - r.n_oracle).abs()),
        max_linf_husimi: fold(&|r| r.linf_husimi),
        max_relative_linf_husimi: fold(&|r| r.linf_husimi / r.max_husimi),
    };
    Ok(RabiReport {
        command: "rabi",
        backend: s.backend.name(),
        config: config.clone(),
        model: s.explicit,
        dt: s.times.dt,
        steps: s.times.steps(),
        records,
        summary,
    })
}

pub fn write_rabi(report: &RabiReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let csv = dir.join("rabi_timeseries.csv");
    let mut out = create(&csv)?;
    let g = report.config.grid;
    writeln!(
        out,
        "# kind=rabi-timeseries backend={} extent={} points={} dt={}",
        report.backend,
        csv_float(g.extent),
        g.points,
        csv_float(report.dt)
    )?;
    writeln!(out, "t,P_e_oracle,P_e_swe,n_oracle,n_swe_via_eq19,linf_husimi")?;
    for r in &report.records {
        let row = [r.t, r.p_e_oracle, r.p_e_swe, r.n_oracle, r.n_swe_via_eq19, r.linf_husimi];
        writeln!(out, "{}", row.map(csv_float).join(","))?;
    }
    out.flush()?;
    let json = dir.join("report.json");
    write_file(&json, &to_json_17(report)?)?;
    Ok(vec![csv, json])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Wigner,
    Husimi,
    SweDensity,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Wigner => "wigner",
            FieldKind::Husimi => "husimi",
            FieldKind::SweDensity => "swe-density",
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wigner" => Ok(FieldKind::Wigner),
            "husimi" => Ok(FieldKind::Husimi),
            "swe-density" => Ok(FieldKind::SweDensity),
            other => bail!("unknown field kind {other:?} (expected wigner, husimi or swe-density)"),
        }
    }
}

/// Reference state at time `t`.
pub fn oracle_at(s: &Scenario, t: f64) -> Result<CompositeState> {
    if t == 0.0 {
        return Ok(s.initial.clone());
    }
    if t < 0.0 || !t.is_finite() {
        bail!("time must be finite and nonnegative (got {t})");
    }
    Ok(oracle_run(s, &grid_to(s, t)?)?.states.pop().expect("nonempty run"))
}

/// Wave at time `t` from the configured backend.
pub fn wave_at(s: &Scenario, t: f64) -> Result<SemiclassicalWave> {
    if t == 0.0 {
        return initial_wave_for(s);
    }
    if t < 0.0 || !t.is_finite() {
        bail!("time must be finite and nonnegative (got {t})");
    }
    Ok(swe_run(s, &grid_to(s, t)?)?.states.pop().expect("nonempty run"))
}

/// Writes `field_<kind>_t<t>.csv` and returns its path.
pub fn phasespace(config: &ScenarioConfig, t: f64, kind: FieldKind, dir: &Path) -> Result<PathBuf> {
    let s = config.resolve()?;
    let field = match kind {
        FieldKind::Wigner | FieldKind::Husimi => {
            let psi = oracle_at(&s, t)?;
            let rho = partial_trace_atom(&density_operator(&psi), s.space)?;
            if kind == FieldKind::Wigner {
                wigner(&rho, &s.grid)?
            } else {
                husimi(&rho, &s.grid)?
            }
        }
        FieldKind::SweDensity => field_density(&on_grid(&s, &wave_at(&s, t)?)?)?,
    };
    let path = dir.join(format!("field_{}_t{}.csv", kind.name(), csv_float(t)));
    let mut out = create(&path)?;
    write_phase_function(
        &field,
        &[("time", csv_float(t)), ("source", kind.name().to_string())],
        &mut out,
    )?;
    out.flush()?;
    info!("wrote {}", path.display());
    Ok(path)
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub command: &'static str,
    pub backend: &'static str,
    pub time: f64,
    pub count: usize,
    pub seed: u64,
    pub mean_abs_a_sq: f64,
    pub standard_error: f64,
    pub quadrature_abs_a_sq: f64,
    pub z_score: f64,
}

/// Draws field values at time `t`, writing `samples.csv` and `report.json`.
pub fn sample(config: &ScenarioConfig, t: f64, dir: &Path) -> Result<SampleReport> {
    let s = config.resolve()?;
    let wave = on_grid(&s, &wave_at(&s, t)?)?;
    let grid = comparison_grid(&s, &wave);
    let samples = sample_field(&wave, s.sampling.count, s.sampling.seed)?;
    let path = dir.join("samples.csv");
    let mut out = create(&path)?;
    writeln!(
        out,
        "# kind=field-samples extent={} points={} atom_dim={} time={} seed={} count={}",
        csv_float(grid.extent()),
        grid.points(),
        wave.atom_dim(),
        csv_float(t),
        s.sampling.seed,
        samples.len()
    )?;
    let mut cols = vec!["a_re".to_string(), "a_im".to_string()];
    for r in 0..wave.atom_dim() {
        cols.push(format!("re_{r}"));
        cols.push(format!("im_{r}"));
    }
    writeln!(out, "{}", cols.join(","))?;
    for x in &samples {
        let mut row = vec![csv_float(x.a.re), csv_float(x.a.im)];
        for z in x.conditional_state.iter() {
            row.push(csv_float(z.re));
            row.push(csv_float(z.im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;

    let n = samples.len() as f64;
    let values: Vec<f64> = samples.iter().map(|x| x.a.norm_sqr()).collect();
    let mean = values.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let se = (var / n).sqrt();
    let quadrature = swe_expectation(&wave, &SemiclassicalObservable::abs_sq())?.re;
    let report = SampleReport {
        command: "sample",
        backend: s.backend.name(),
        time: t,
        count: samples.len(),
        seed: s.sampling.seed,
        mean_abs_a_sq: mean,
        standard_error: se,
        quadrature_abs_a_sq: quadrature,
        z_score: if se > 0.0 { (mean - quadrature) / se } else { 0.0 },
    };
    write_file(&dir.join("report.json"), &to_json_17(&report)?)?;
    Ok(report)
}
