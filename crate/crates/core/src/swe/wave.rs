use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::fockspace::{CompositeState, FockBasis};
use crate::linalg::{re, CMatrix, CVector};
use crate::output::csv_float;
use crate::phasespace::{OperatorPhaseField, PhaseFunction, PhaseGrid, PhaseKind, SemiclassicalObservable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveRepresentation {
    Grid,
    Bargmann,
}

/// Where a wave lives: nodes of a phase-space grid, or coefficients over the
/// Bargmann functions `e^{-|a|²/2} (a*)^n / sqrt(π n!)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Grid(PhaseGrid),
    Bargmann(FockBasis),
}

#[derive(Debug, Clone, PartialEq)]
enum WaveData {
    /// `components[r][node]` is atomic component `r` of `ψ(a)` at `node`.
    Grid { grid: PhaseGrid, components: Vec<Vec<C64>> },
    /// `coefficients[n]` is the atomic vector `F_n`.
    Bargmann { basis: FockBasis, coefficients: Vec<CVector> },
}

/// Semiclassical wave function `ψ(a, a*)`: an atomic state vector at every
/// value of the classical field.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalWave {
    time: f64,
    atom_dim: usize,
    data: WaveData,
}

/// A field value drawn from the wave's density together with the atomic
/// state conditioned on it.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub a: C64,
    pub conditional_state: CVector,
}

fn check_unit(psi_atom: &CVector) -> Result<()> {
    let norm = psi_atom.norm();
    if psi_atom.is_empty() || (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized {
            what: "atomic state",
            norm,
        });
    }
    Ok(())
}

/// `<a|n> / sqrt(π)` as a function of `n`, i.e. the Bargmann basis at `a`.
pub(crate) fn bargmann_basis_at(a: C64, basis: FockBasis) -> Vec<C64> {
    let ac = a.conj();
    let mut out = Vec::with_capacity(basis.dim());
    let mut term = re((-0.5 * a.norm_sqr()).exp() / PI.sqrt());
    for n in 0..basis.dim() {
        if n > 0 {
            term *= ac / (n as f64).sqrt();
        }
        out.push(term);
    }
    out
}

/// Vacuum-cavity initial condition `ψ0(a) = ψ_ato e^{-|a|²/2} / sqrt(π)`.
pub fn initial_wave(psi_atom: &CVector, support: Support) -> Result<SemiclassicalWave> {
    check_unit(psi_atom)?;
    let d = psi_atom.len();
    let data = match support {
        Support::Grid(grid) => {
            let envelope: Vec<f64> = grid.nodes().map(|a| (-0.5 * a.norm_sqr()).exp() / PI.sqrt()).collect();
            WaveData::Grid {
                grid,
                components: (0..d)
                    .map(|r| envelope.iter().map(|&e| psi_atom[r] * e).collect())
                    .collect(),
            }
        }
        Support::Bargmann(basis) => {
            let mut coefficients = vec![CVector::zeros(d); basis.dim()];
            coefficients[0] = psi_atom.clone();
            WaveData::Bargmann { basis, coefficients }
        }
    };
    Ok(SemiclassicalWave { time: 0.0, atom_dim: d, data })
}

impl SemiclassicalWave {
    /// Bargmann wave with `F_n` read from the Fock components of a composite state.
    pub fn from_composite(state: &CompositeState, time: f64) -> Self {
        let space = state.space();
        let coefficients = (0..space.field_dim()).map(|n| state.fock_component(n)).collect();
        Self {
            time,
            atom_dim: space.atom_dim(),
            data: WaveData::Bargmann {
                basis: space.fock(),
                coefficients,
            },
        }
    }

    pub fn from_coefficients(basis: FockBasis, coefficients: Vec<CVector>, time: f64) -> Result<Self> {
        if coefficients.len() != basis.dim() {
            return Err(mismatch(basis.dim(), coefficients.len()));
        }
        let d = coefficients[0].len();
        if coefficients.iter().any(|c| c.len() != d) {
            return Err(mismatch("equal-length atomic vectors", "ragged coefficients"));
        }
        Ok(Self {
            time,
            atom_dim: d,
            data: WaveData::Bargmann { basis, coefficients },
        })
    }

    pub fn from_components(grid: PhaseGrid, components: Vec<Vec<C64>>, time: f64) -> Result<Self> {
        if components.is_empty() || components.iter().any(|c| c.len() != grid.len()) {
            return Err(mismatch(format!("components of length {}", grid.len()), "other shape"));
        }
        Ok(Self {
            time,
            atom_dim: components.len(),
            data: WaveData::Grid { grid, components },
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn atom_dim(&self) -> usize {
        self.atom_dim
    }

    pub fn representation(&self) -> WaveRepresentation {
        match self.data {
            WaveData::Grid { .. } => WaveRepresentation::Grid,
            WaveData::Bargmann { .. } => WaveRepresentation::Bargmann,
        }
    }

    pub fn grid(&self) -> Option<&PhaseGrid> {
        match &self.data {
            WaveData::Grid { grid, .. } => Some(grid),
            WaveData::Bargmann { .. } => None,
        }
    }

    pub fn basis(&self) -> Option<FockBasis> {
        match &self.data {
            WaveData::Bargmann { basis, .. } => Some(*basis),
            WaveData::Grid { .. } => None,
        }
    }

    pub fn components(&self) -> Option<&[Vec<C64>]> {
        match &self.data {
            WaveData::Grid { components, .. } => Some(components),
            WaveData::Bargmann { .. } => None,
        }
    }

    pub(crate) fn components_mut(&mut self) -> Option<&mut Vec<Vec<C64>>> {
        match &mut self.data {
            WaveData::Grid { components, .. } => Some(components),
            WaveData::Bargmann { .. } => None,
        }
    }

    pub fn coefficients(&self) -> Option<&[CVector]> {
        match &self.data {
            WaveData::Bargmann { coefficients, .. } => Some(coefficients),
            WaveData::Grid { .. } => None,
        }
    }

    pub(crate) fn coefficients_mut(&mut self) -> Option<&mut Vec<CVector>> {
        match &mut self.data {
            WaveData::Bargmann { coefficients, .. } => Some(coefficients),
            WaveData::Grid { .. } => None,
        }
    }

    /// `∫ ||ψ||² da* da` (grid) or `∑ ||F_n||²` (Bargmann).
    pub fn total_probability(&self) -> f64 {
        match &self.data {
            WaveData::Grid { grid, components } => {
                components.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() * grid.weight()
            }
            WaveData::Bargmann { coefficients, .. } => coefficients.iter().map(|c| c.norm_squared()).sum(),
        }
    }

    /// `ψ` at grid node `node`.
    pub fn node_value(&self, node: usize) -> Result<CVector> {
        match &self.data {
            WaveData::Grid { components, .. } => {
                Ok(CVector::from_iterator(self.atom_dim, components.iter().map(|c| c[node])))
            }
            WaveData::Bargmann { .. } => Err(Error::Representation { expected: "grid" }),
        }
    }

    /// `ψ(a)`: the Bargmann series summed at `a`, or the value at the nearest
    /// node for grid waves.
    pub fn value_at(&self, a: C64) -> Result<CVector> {
        match &self.data {
            WaveData::Bargmann { basis, coefficients } => {
                let phi = bargmann_basis_at(a, *basis);
                let mut out = CVector::zeros(self.atom_dim);
                for (f, b) in coefficients.iter().zip(phi) {
                    out.axpy(b, f, re(1.0));
                }
                Ok(out)
            }
            WaveData::Grid { grid, .. } => {
                let idx = |x: f64| ((x + grid.extent()) / grid.spacing()).round();
                let (i, j) = (idx(a.re), idx(a.im));
                let m = grid.points() as f64;
                if !(0.0..m).contains(&i) || !(0.0..m).contains(&j) {
                    return Err(Error::InvalidParameter(format!("field value {a} lies outside the grid")));
                }
                self.node_value(grid.flat(i as usize, j as usize))
            }
        }
    }

    /// Largest `||ψ||` over grid nodes.
    pub fn max_norm(&self) -> Result<f64> {
        let components = self.components().ok_or(Error::Representation { expected: "grid" })?;
        let n = components[0].len();
        Ok((0..n)
            .map(|k| components.iter().map(|c| c[k].norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max))
    }
}

/// Sums the Bargmann series at every node of `grid`.
pub fn evaluate_on_grid(wave: &SemiclassicalWave, grid: &PhaseGrid) -> Result<SemiclassicalWave> {
    let (basis, coefficients) = match &wave.data {
        WaveData::Bargmann { basis, coefficients } => (*basis, coefficients),
        WaveData::Grid { .. } => return Err(Error::Representation { expected: "bargmann" }),
    };
    let d = wave.atom_dim;
    let mut components = vec![vec![C64::default(); grid.len()]; d];
    for (k, a) in grid.nodes().enumerate() {
        let phi = bargmann_basis_at(a, basis);
        for (f, b) in coefficients.iter().zip(&phi) {
            for r in 0..d {
                components[r][k] += f[r] * b;
            }
        }
    }
    Ok(SemiclassicalWave {
        time: wave.time,
        atom_dim: d,
        data: WaveData::Grid { grid: *grid, components },
    })
}

/// Projects a grid wave onto the Bargmann functions by quadrature:
/// `F_n = ∫ <n|a> ψ(a) da* da / sqrt(π)`.
pub fn project_to_bargmann(wave: &SemiclassicalWave, basis: FockBasis) -> Result<SemiclassicalWave> {
    let (grid, components) = match &wave.data {
        WaveData::Grid { grid, components } => (grid, components),
        WaveData::Bargmann { .. } => return Err(Error::Representation { expected: "grid" }),
    };
    let d = wave.atom_dim;
    let mut coefficients = vec![CVector::zeros(d); basis.dim()];
    for (k, a) in grid.nodes().enumerate() {
        // conj of the Bargmann function at a, which already carries the 1/sqrt(π)
        let phi = bargmann_basis_at(a, basis);
        for (f, b) in coefficients.iter_mut().zip(&phi) {
            for r in 0..d {
                f[r] += b.conj() * components[r][k];
            }
        }
    }
    let w = re(grid.weight());
    for f in &mut coefficients {
        *f *= w;
    }
    Ok(SemiclassicalWave {
        time: wave.time,
        atom_dim: d,
        data: WaveData::Bargmann { basis, coefficients },
    })
}

fn grid_parts(wave: &SemiclassicalWave) -> Result<(&PhaseGrid, &[Vec<C64>])> {
    match &wave.data {
        WaveData::Grid { grid, components } => Ok((grid, components)),
        WaveData::Bargmann { .. } => Err(Error::Representation { expected: "grid" }),
    }
}

/// Field probability density `ρ(a, a*) = ||ψ(a, a*)||²`.
pub fn field_density(wave: &SemiclassicalWave) -> Result<PhaseFunction> {
    let (grid, components) = grid_parts(wave)?;
    let values = (0..grid.len())
        .map(|k| components.iter().map(|c| c[k].norm_sqr()).sum())
        .collect();
    PhaseFunction::new(*grid, PhaseKind::Husimi, values)
}

/// Node-wise outer product `ψ ψ†`, the coarse-grained semiclassical density.
pub fn wave_density(wave: &SemiclassicalWave) -> Result<OperatorPhaseField> {
    let (grid, components) = grid_parts(wave)?;
    let d = wave.atom_dim;
    let mut field = OperatorPhaseField::zeros(*grid, d);
    for r in 0..d {
        for s in 0..d {
            let plane = &mut field.planes[r * d + s];
            for (k, v) in plane.iter_mut().enumerate() {
                *v = components[r][k] * components[s][k].conj();
            }
        }
    }
    Ok(field)
}

/// Atomic state conditioned on the field value `a`.
pub fn conditional_state(wave: &SemiclassicalWave, a: C64) -> Result<FieldSample> {
    let psi = wave.value_at(a)?;
    let norm = psi.norm();
    if norm <= 1e-12 {
        return Err(Error::VanishingNorm { norm });
    }
    Ok(FieldSample {
        a,
        conditional_state: psi / re(norm),
    })
}

/// `∫ ψ† F ψ da* da` by quadrature.
pub fn swe_expectation(wave: &SemiclassicalWave, observable: &SemiclassicalObservable) -> Result<C64> {
    let (grid, components) = grid_parts(wave)?;
    let d = wave.atom_dim;
    let symbol = observable.sample(grid)?;
    let atomic = match &observable.atomic {
        Some(op) if op.shape() != (d, d) => {
            return Err(mismatch(format!("{d}x{d}"), format!("{:?}", op.shape())));
        }
        Some(op) => op.clone(),
        None => CMatrix::identity(d, d),
    };
    let mut sum = C64::default();
    for (k, f) in symbol.iter().enumerate() {
        let mut quad = C64::default();
        for r in 0..d {
            let left = components[r][k].conj();
            for s in 0..d {
                quad += left * atomic[(r, s)] * components[s][k];
            }
        }
        sum += f * quad;
    }
    Ok(sum * grid.weight())
}

/// Writes a grid wave as CSV: `x, y, re_0, im_0, ...` under a `#` metadata line.
pub fn write_wave_csv<W: Write>(wave: &SemiclassicalWave, mut out: W) -> Result<()> {
    let (grid, components) = grid_parts(wave)?;
    writeln!(
        out,
        "# kind=swe-wave extent={} points={} atom_dim={} time={}",
        csv_float(grid.extent()),
        grid.points(),
        wave.atom_dim,
        csv_float(wave.time)
    )?;
    let mut cols = vec!["x".to_string(), "y".to_string()];
    for r in 0..wave.atom_dim {
        cols.push(format!("re_{r}"));
        cols.push(format!("im_{r}"));
    }
    writeln!(out, "{}", cols.join(","))?;
    for (k, a) in grid.nodes().enumerate() {
        let mut row = vec![csv_float(a.re), csv_float(a.im)];
        for c in components {
            row.push(csv_float(c[k].re));
            row.push(csv_float(c[k].im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
