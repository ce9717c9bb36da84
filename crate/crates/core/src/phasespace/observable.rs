use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::grid::PhaseGrid;
use crate::error::{mismatch, Result};
use crate::linalg::CMatrix;

/// Polynomial `∑ c_{pq} a^p (a*)^q` in the classical field variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: BTreeMap<(u32, u32), C64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c a^p (a*)^q`
    pub fn monomial(p: u32, q: u32, c: C64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((p, q), c);
        Self { terms }
    }

    /// `|a|²`
    pub fn abs_sq() -> Self {
        Self::monomial(1, 1, C64::new(1.0, 0.0))
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: C64) {
        *self.terms.entry((p, q)).or_default() += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, C64)> + '_ {
        self.terms.iter().map(|(&(p, q), &c)| (p, q, c))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|&(p, q)| (p + q) as usize).max().unwrap_or(0)
    }

    pub fn evaluate(&self, a: C64) -> C64 {
        let ac = a.conj();
        self.terms
            .iter()
            .map(|(&(p, q), &c)| c * a.powu(p) * ac.powu(q))
            .sum()
    }

    /// Average over `a + a0` with `a0` drawn from the centred complex Gaussian
    /// of mean square `mean_square`, using `E[a0^k a0*^l] = δ_{kl} k! s^k`.
    pub fn gaussian_smoothed(&self, mean_square: f64) -> Self {
        let mut out = Self::zero();
        for (&(p, q), &c) in &self.terms {
            for k in 0..=p.min(q) {
                let weight = binomial(p, k) * binomial(q, k) * factorial(k) * mean_square.powi(k as i32);
                out.add_term(p - k, q - k, c * weight);
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Classical-field dependence of an observable.
#[derive(Clone)]
pub enum FieldSymbol {
    Polynomial(Polynomial),
    Function(Arc<dyn Fn(C64) -> C64 + Send + Sync>),
    Sampled { grid: PhaseGrid, values: Vec<C64> },
}

impl fmt::Debug for FieldSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSymbol::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            FieldSymbol::Function(_) => f.write_str("Function(..)"),
            FieldSymbol::Sampled { grid, .. } => f.debug_struct("Sampled").field("grid", grid).finish(),
        }
    }
}

/// Semiclassical observable `F(a, a*) = A ⊗ f(a, a*)`: an atomic operator
/// (identity when absent) times a scalar symbol of the classical field.
#[derive(Debug, Clone)]
pub struct SemiclassicalObservable {
    pub atomic: Option<CMatrix>,
    pub symbol: FieldSymbol,
}

impl SemiclassicalObservable {
    pub fn polynomial(p: Polynomial) -> Self {
        Self {
            atomic: None,
            symbol: FieldSymbol::Polynomial(p),
        }
    }

    pub fn function(f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            atomic: None,
            symbol: FieldSymbol::Function(Arc::new(f)),
        }
    }

    pub fn sampled(grid: PhaseGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(mismatch(grid.len(), values.len()));
        }
        Ok(Self {
            atomic: None,
            symbol: FieldSymbol::Sampled { grid, values },
        })
    }

    pub fn one() -> Self {
        Self::polynomial(Polynomial::constant(C64::new(1.0, 0.0)))
    }

    pub fn a() -> Self {
        Self::polynomial(Polynomial::monomial(1, 0, C64::new(1.0, 0.0)))
    }

    pub fn a_conj() -> Self {
        Self::polynomial(Polynomial::monomial(0, 1, C64::new(1.0, 0.0)))
    }

    pub fn abs_sq() -> Self {
        Self::polynomial(Polynomial::abs_sq())
    }

    /// Atomic operator constant over phase space.
    pub fn atomic_operator(op: CMatrix) -> Self {
        Self::one().with_atomic(op)
    }

    pub fn with_atomic(mut self, op: CMatrix) -> Self {
        self.atomic = Some(op);
        self
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.symbol {
            FieldSymbol::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Scalar symbol at every node of `grid`.
    pub fn sample(&self, grid: &PhaseGrid) -> Result<Vec<C64>> {
        match &self.symbol {
            FieldSymbol::Polynomial(p) => Ok(grid.nodes().map(|a| p.evaluate(a)).collect()),
            FieldSymbol::Function(f) => Ok(grid.nodes().map(|a| f(a)).collect()),
            FieldSymbol::Sampled { grid: g, values } => {
                if g != grid {
                    return Err(mismatch(format!("{g:?}"), format!("{grid:?}")));
                }
                Ok(values.clone())
            }
        }
    }
}
