//! Expectation values on both sides of the phase-space correspondence:
//! quadrature against a semiclassical density, and the operator route that
//! substitutes the commuting superoperators `a_c`, `a_c†` for `a`, `a*`.

use num_complex::Complex64 as C64;

use super::field::{OperatorPhaseField, PhaseFunction, PhaseKind};
use super::grid::PhaseGrid;
use super::observable::SemiclassicalObservable;
use crate::error::{mismatch, Error, Result};
use crate::fockspace::{symmetric_product, tensor, FockBasis};
use crate::linalg::{trace, CMatrix};

/// Highest polynomial degree accepted by [`symmetric_moment_oracle`].
pub const MAX_ORACLE_DEGREE: usize = 4;

/// Densities an observable can be integrated against.
pub trait PhaseDensity {
    fn grid(&self) -> &PhaseGrid;
    /// Node-wise `tr_ato(A ρ(a))`, where `A` is the atomic factor of the observable.
    fn atomic_weights(&self, atomic: Option<&CMatrix>) -> Result<Vec<C64>>;
}

impl PhaseDensity for PhaseFunction {
    fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    fn atomic_weights(&self, atomic: Option<&CMatrix>) -> Result<Vec<C64>> {
        if atomic.is_some() {
            return Err(Error::InvalidParameter(
                "a scalar phase-space density cannot weigh an atomic operator".into(),
            ));
        }
        Ok(self.values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }
}

impl PhaseDensity for OperatorPhaseField {
    fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    fn atomic_weights(&self, atomic: Option<&CMatrix>) -> Result<Vec<C64>> {
        let d = self.atom_dim;
        match atomic {
            None => Ok(self.atomic_trace()),
            Some(op) => {
                if op.shape() != (d, d) {
                    return Err(mismatch(format!("{d}x{d}"), format!("{:?}", op.shape())));
                }
                Ok((0..self.grid.len())
                    .map(|k| {
                        let mut acc = C64::default();
                        for r in 0..d {
                            for s in 0..d {
                                acc += op[(r, s)] * self.planes[s * d + r][k];
                            }
                        }
                        acc
                    })
                    .collect())
            }
        }
    }
}

/// `∫ tr_ato(F(a, a*) ρ(a, a*)) da* da` by the node quadrature.
///
/// Complex in general; Hermitian observables give a real value up to
/// round-off.
pub fn semiclassical_expectation<D: PhaseDensity>(observable: &SemiclassicalObservable, density: &D) -> Result<C64> {
    let grid = density.grid();
    let symbol = observable.sample(grid)?;
    let weights = density.atomic_weights(observable.atomic.as_ref())?;
    let sum: C64 = symbol.iter().zip(&weights).map(|(f, w)| f * w).sum();
    Ok(sum * grid.weight())
}

/// `<a† a> = ∫ |a|² Q da* da - 1`.
pub fn photon_number_from_husimi(q: &PhaseFunction) -> Result<f64> {
    if q.kind != PhaseKind::Husimi {
        return Err(Error::InvalidParameter(format!(
            "photon number needs a Husimi function, got {}",
            q.kind.name()
        )));
    }
    let second: f64 = q.grid.nodes().zip(&q.values).map(|(a, v)| a.norm_sqr() * v).sum();
    Ok(second * q.grid.weight() - 1.0)
}

/// `tr(F(a_c, a_c†) ρ)` with `a^p (a*)^q ↦ a_c^p a_c†^q` applied to `ρ` by
/// repeated symmetric products.
///
/// `rho` is either a field operator or a composite operator whose dimension
/// is a multiple of the field dimension. Supports must stay `degree` levels
/// below the truncation edge for the result to be exact.
pub fn symmetric_moment_oracle(observable: &SemiclassicalObservable, rho: &CMatrix, basis: FockBasis) -> Result<C64> {
    let poly = observable.as_polynomial().ok_or(Error::NotPolynomial {
        degree: usize::MAX,
        max: MAX_ORACLE_DEGREE,
    })?;
    if poly.degree() > MAX_ORACLE_DEGREE {
        return Err(Error::NotPolynomial {
            degree: poly.degree(),
            max: MAX_ORACLE_DEGREE,
        });
    }
    let f = basis.dim();
    if !rho.is_square() || rho.nrows() % f != 0 {
        return Err(mismatch(
            format!("square operator with dimension a multiple of {f}"),
            format!("{:?}", rho.shape()),
        ));
    }
    let atom_dim = rho.nrows() / f;
    let id = CMatrix::identity(atom_dim, atom_dim);
    let a = tensor(&id, &basis.annihilation());
    let ad = a.adjoint();

    let mut weighted = C64::default();
    for (p, q, coeff) in poly.terms() {
        let mut x = rho.clone();
        for _ in 0..q {
            x = symmetric_product(&ad, &x)?;
        }
        for _ in 0..p {
            x = symmetric_product(&a, &x)?;
        }
        let t = match &observable.atomic {
            None => trace(&x),
            Some(op) => {
                if op.shape() != (atom_dim, atom_dim) {
                    return Err(mismatch(format!("{atom_dim}x{atom_dim}"), format!("{:?}", op.shape())));
                }
                let lifted = tensor(op, &CMatrix::identity(f, f));
                trace(&(lifted * x))
            }
        };
        weighted += coeff * t;
    }
    Ok(weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;
    use crate::phasespace::husimi::husimi;
    use crate::phasespace::observable::Polynomial;

    fn projector(dim: usize, n: usize) -> CMatrix {
        let mut p = CMatrix::zeros(dim, dim);
        p[(n, n)] = re(1.0);
        p
    }

    #[test]
    fn husimi_moments_of_fock_states() {
        let grid = PhaseGrid::default();
        let tol = grid.tol_grid();
        let vac = husimi(&projector(6, 0), &grid).unwrap();
        let one = husimi(&projector(6, 1), &grid).unwrap();
        let e1 = semiclassical_expectation(&SemiclassicalObservable::one(), &vac).unwrap();
        assert!((e1.re - 1.0).abs() < tol);
        let m0 = semiclassical_expectation(&SemiclassicalObservable::abs_sq(), &vac).unwrap();
        let m1 = semiclassical_expectation(&SemiclassicalObservable::abs_sq(), &one).unwrap();
        assert!((m0.re - 1.0).abs() < tol);
        assert!((m1.re - 2.0).abs() < tol);
        assert!(photon_number_from_husimi(&vac).unwrap().abs() < tol);
        assert!((photon_number_from_husimi(&one).unwrap() - 1.0).abs() < tol);
    }

    #[test]
    fn photon_number_requires_husimi_kind() {
        let grid = PhaseGrid::new(3.0, 32).unwrap();
        let w = PhaseFunction::from_fn(grid, PhaseKind::Wigner, |_| 0.0);
        assert!(photon_number_from_husimi(&w).is_err());
    }

    #[test]
    fn oracle_on_vacuum() {
        let basis = FockBasis::new(6).unwrap();
        let rho = projector(7, 0);
        let half = symmetric_moment_oracle(&SemiclassicalObservable::abs_sq(), &rho, basis).unwrap();
        assert!((half - re(0.5)).norm() < 1e-15);
        let one = symmetric_moment_oracle(&SemiclassicalObservable::one(), &rho, basis).unwrap();
        assert!((one - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn oracle_rejects_non_polynomials() {
        let basis = FockBasis::new(6).unwrap();
        let rho = projector(7, 0);
        let f = SemiclassicalObservable::function(|a| a);
        assert!(matches!(
            symmetric_moment_oracle(&f, &rho, basis),
            Err(Error::NotPolynomial { .. })
        ));
        let high = SemiclassicalObservable::polynomial(Polynomial::monomial(3, 2, re(1.0)));
        assert!(matches!(
            symmetric_moment_oracle(&high, &rho, basis),
            Err(Error::NotPolynomial { degree: 5, .. })
        ));
    }
}
