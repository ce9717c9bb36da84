//! Truncated Fock space of the cavity mode, the atom ⊗ mode composite space,
//! and the symmetric-product superoperators built on them.
//!
//! Composite indices follow `atom_index * (n_max + 1) + fock_index`, so
//! `tensor(atom_op, field_op)` is the ordinary Kronecker product.
//!
//! Identities such as `[a, a†] = 1` hold only away from the truncation edge:
//! the top Fock level has no partner above it. Callers checking operator
//! identities should keep supports a few levels below `n_max`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{expm, re, CMatrix, CVector};

/// Fock basis `|0>, ..., |n_max>` of the single cavity mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockBasis {
    n_max: usize,
}

impl FockBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_max must be at least 2, got {n_max}"
            )));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Lowering operator with `<n-1|a|n> = sqrt(n)`.
    pub fn annihilation(&self) -> CMatrix {
        annihilation(*self)
    }

    pub fn creation(&self) -> CMatrix {
        annihilation(*self).adjoint()
    }

    pub fn number(&self) -> CMatrix {
        CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                re(i as f64)
            } else {
                C64::default()
            }
        })
    }

    /// Fock state `|n>`.
    pub fn fock_state(&self, n: usize) -> Result<CVector> {
        if n > self.n_max {
            return Err(mismatch(format!("occupation <= {}", self.n_max), n));
        }
        let mut v = CVector::zeros(self.dim());
        v[n] = re(1.0);
        Ok(v)
    }

    /// Coherent state `e^{-|alpha|^2/2} sum_n alpha^n / sqrt(n!) |n>` cut at
    /// `n_max`, without renormalization.
    pub fn coherent_unnormalized(&self, alpha: C64) -> CVector {
        let mut v = CVector::zeros(self.dim());
        let mut term = re((-0.5 * alpha.norm_sqr()).exp());
        for n in 0..self.dim() {
            if n > 0 {
                term *= alpha / (n as f64).sqrt();
            }
            v[n] = term;
        }
        v
    }

    /// Truncated coherent state renormalized to unit norm.
    pub fn coherent_state(&self, alpha: C64) -> CVector {
        let v = self.coherent_unnormalized(alpha);
        let norm = v.norm();
        v / re(norm)
    }
}

/// The lowering operator of `basis` as a dense matrix.
pub fn annihilation(basis: FockBasis) -> CMatrix {
    let dim = basis.dim();
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = re((n as f64).sqrt());
    }
    a
}

/// Atom ⊗ truncated mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeSpace {
    atom_dim: usize,
    fock: FockBasis,
}

impl CompositeSpace {
    pub fn new(atom_dim: usize, fock: FockBasis) -> Result<Self> {
        if atom_dim == 0 {
            return Err(Error::InvalidParameter("atom dimension must be positive".into()));
        }
        Ok(Self { atom_dim, fock })
    }

    pub fn atom_dim(&self) -> usize {
        self.atom_dim
    }

    pub fn fock(&self) -> FockBasis {
        self.fock
    }

    pub fn field_dim(&self) -> usize {
        self.fock.dim()
    }

    pub fn total_dim(&self) -> usize {
        self.atom_dim * self.fock.dim()
    }

    #[inline]
    pub fn index(&self, atom: usize, fock: usize) -> usize {
        atom * self.fock.dim() + fock
    }

    /// `1_atom ⊗ op`.
    pub fn lift_field(&self, op: &CMatrix) -> CMatrix {
        tensor(&CMatrix::identity(self.atom_dim, self.atom_dim), op)
    }

    /// `op ⊗ 1_field`.
    pub fn lift_atom(&self, op: &CMatrix) -> CMatrix {
        tensor(op, &CMatrix::identity(self.field_dim(), self.field_dim()))
    }

    /// Field-space block `<i| O |j>` of a composite operator.
    pub fn field_block(&self, op: &CMatrix, i: usize, j: usize) -> CMatrix {
        let dim = self.field_dim();
        op.view((i * dim, j * dim), (dim, dim)).into_owned()
    }

    fn check_operator(&self, op: &CMatrix) -> Result<()> {
        let n = self.total_dim();
        if op.nrows() != n || op.ncols() != n {
            return Err(mismatch(
                format!("{n}x{n} composite operator"),
                format!("{}x{}", op.nrows(), op.ncols()),
            ));
        }
        Ok(())
    }
}

/// Joint pure state of atom and mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    space: CompositeSpace,
    amplitudes: CVector,
}

impl CompositeState {
    pub fn new(space: CompositeSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(mismatch(space.total_dim(), amplitudes.len()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized {
                what: "composite state",
                norm,
            });
        }
        Ok(Self { space, amplitudes })
    }

    /// Skips the normalization check; used for states produced by integration,
    /// whose norm is policed by the integrator's drift guard.
    pub(crate) fn from_evolved(space: CompositeSpace, amplitudes: CVector) -> Self {
        debug_assert_eq!(amplitudes.len(), space.total_dim());
        Self { space, amplitudes }
    }

    pub fn space(&self) -> CompositeSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, atom: usize, fock: usize) -> C64 {
        self.amplitudes[self.space.index(atom, fock)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Atomic vector multiplying `|n>`; these are the Bargmann coefficients of the state.
    pub fn fock_component(&self, n: usize) -> CVector {
        CVector::from_iterator(
            self.space.atom_dim(),
            (0..self.space.atom_dim()).map(|i| self.amplitude(i, n)),
        )
    }

    /// Population of atomic level `level`.
    pub fn atomic_population(&self, level: usize) -> f64 {
        (0..self.space.field_dim())
            .map(|n| self.amplitude(level, n).norm_sqr())
            .sum()
    }

    /// `<a† a>`.
    pub fn photon_number(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.space.atom_dim() {
            for n in 0..self.space.field_dim() {
                total += n as f64 * self.amplitude(i, n).norm_sqr();
            }
        }
        total
    }

    /// Total weight in the top Fock level.
    pub fn top_level_weight(&self) -> f64 {
        let top = self.space.fock().n_max();
        (0..self.space.atom_dim())
            .map(|i| self.amplitude(i, top).norm_sqr())
            .sum()
    }
}

/// `(A O + O A) / 2`.
pub fn symmetric_product(a: &CMatrix, o: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.shape() != o.shape() {
        return Err(mismatch(
            format!("{:?} square", a.shape()),
            format!("{:?}", o.shape()),
        ));
    }
    Ok((a * o + o * a) * re(0.5))
}

/// Applies `exp(-λ* a_c + λ a_c†)` to `rho` through its product form
/// `exp(-λ* a/2) exp(λ a†/2) ρ exp(λ a†/2) exp(-λ* a/2)`.
///
/// `rho` may be a field-space operator or a composite operator whose
/// dimension is a multiple of the field dimension; in the latter case the
/// map acts on every field block.
pub fn superop_weyl_apply(lambda: C64, rho: &CMatrix, basis: FockBasis) -> Result<CMatrix> {
    let dim = basis.dim();
    if !rho.is_square() || rho.nrows() % dim != 0 {
        return Err(mismatch(
            format!("square operator with dimension a multiple of {dim}"),
            format!("{}x{}", rho.nrows(), rho.ncols()),
        ));
    }
    let a = basis.annihilation();
    let ad = basis.creation();
    let lower = expm(&(&a * (-lambda.conj() * 0.5)));
    let raise = expm(&(&ad * (lambda * 0.5)));
    let mut left = &lower * &raise;
    let mut right = &raise * &lower;
    let blocks = rho.nrows() / dim;
    if blocks > 1 {
        let id = CMatrix::identity(blocks, blocks);
        left = tensor(&id, &left);
        right = tensor(&id, &right);
    }
    Ok(left * rho * right)
}

/// `tr_field O`: the atomic operator with entries `sum_n O[(i,n),(j,n)]`.
pub fn partial_trace_field(o: &CMatrix, space: CompositeSpace) -> Result<CMatrix> {
    space.check_operator(o)?;
    let d = space.atom_dim();
    let f = space.field_dim();
    Ok(CMatrix::from_fn(d, d, |i, j| {
        (0..f).map(|n| o[(space.index(i, n), space.index(j, n))]).sum()
    }))
}

/// `tr_atom O`: the field operator with entries `sum_i O[(i,m),(i,n)]`.
pub fn partial_trace_atom(o: &CMatrix, space: CompositeSpace) -> Result<CMatrix> {
    space.check_operator(o)?;
    let d = space.atom_dim();
    let f = space.field_dim();
    Ok(CMatrix::from_fn(f, f, |m, n| {
        (0..d).map(|i| o[(space.index(i, m), space.index(i, n))]).sum()
    }))
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
