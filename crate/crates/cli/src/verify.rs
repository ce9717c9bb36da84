//! Identity checks at the scale of a scenario. Every check reports its
//! measured error next to the threshold it must meet.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use swe_core::fockspace::{partial_trace_atom, partial_trace_field, superop_weyl_apply, symmetric_product};
use swe_core::linalg::max_abs;
use swe_core::phasespace::{
    characteristic_function, husimi, husimi_density, photon_number_from_husimi, semiclassical_expectation,
    sharp_density, superop_characteristic_function, symmetric_moment_oracle, wigner, CoarseGrain, GaussianKernel,
    Polynomial,
};
use swe_core::swe::{compare_to_oracle, field_density, swe_expectation, wave_density};
use swe_core::unitary::density_operator;
use swe_core::{CMatrix, CVector, Complex64, CompositeState, FockBasis, PhaseKind, SemiclassicalObservable};

use crate::commands::{comparison_grid, on_grid, oracle_run, swe_run};
use crate::config::{Backend, ScenarioConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub error: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &str, error: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            error,
            threshold,
            // NaN never passes
            passed: error <= threshold,
        }
    }
}

/// Knobs for the check suite. `kernel` is the coarse-graining kernel under
/// test; anything but the vacuum kernel is a deliberate corruption.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub kernel: GaussianKernel,
    /// Largest number of trajectory snapshots used by the phase-space checks.
    pub snapshots: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            kernel: GaussianKernel::vacuum(),
            snapshots: 9,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let (u, v): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
    Complex64::from_polar((-2.0 * u.ln()).sqrt(), 2.0 * std::f64::consts::PI * v)
}

fn random_operator(rng: &mut ChaCha8Rng, dim: usize, support: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| {
        if i <= support && j <= support {
            gaussian(rng)
        } else {
            Complex64::default()
        }
    })
}

fn random_projector(rng: &mut ChaCha8Rng, dim: usize, support: usize) -> CMatrix {
    let v = CVector::from_fn(dim, |i, _| if i <= support { gaussian(rng) } else { Complex64::default() });
    let v = &v / Complex64::new(v.norm(), 0.0);
    &v * v.adjoint()
}

fn block_max(m: &CMatrix, limit: usize) -> f64 {
    let mut out = 0.0_f64;
    for i in 0..=limit {
        for j in 0..=limit {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

fn monomials(d: usize) -> Vec<SemiclassicalObservable> {
    let one = Complex64::new(1.0, 0.0);
    let sz = CMatrix::from_fn(d, d, |i, j| Complex64::new(if i == j { if i == 0 { 1.0 } else { -1.0 } } else { 0.0 }, 0.0));
    let mut out = Vec::new();
    for (p, q) in [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)] {
        let f = SemiclassicalObservable::polynomial(Polynomial::monomial(p, q, one));
        out.push(f.clone().with_atomic(sz.clone()));
        out.push(f);
    }
    out
}

fn snapshots<T: Clone>(items: &[T], count: usize) -> Vec<T> {
    if items.len() <= count {
        return items.to_vec();
    }
    (0..count)
        .map(|k| items[k * (items.len() - 1) / (count - 1).max(1)].clone())
        .collect()
}

/// Runs every identity check for the scenario.
pub fn run_verify(config: &ScenarioConfig, options: &VerifyOptions) -> Result<Vec<IdentityCheck>> {
    let s = config.resolve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.sampling.seed);
    let mut checks = Vec::new();
    let basis = s.space.fock();
    let n_max = basis.n_max();

    // Lowering and raising superoperators commute below the truncation edge.
    let (a, ad) = (basis.annihilation(), basis.creation());
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let o = random_operator(&mut rng, basis.dim(), n_max - 2);
        let x = symmetric_product(&a, &symmetric_product(&ad, &o)?)?;
        let y = symmetric_product(&ad, &symmetric_product(&a, &o)?)?;
        worst = worst.max(max_abs(&(x - y)));
    }
    checks.push(IdentityCheck::new("superoperator_commutativity", worst, 1e-10));

    // Exponentials need head room above the state; use at least 24 levels.
    let wide = FockBasis::new(n_max.max(24))?;
    let mut worst = 0.0_f64;
    for k in 0..20 {
        let rho = random_projector(&mut rng, wide.dim(), wide.n_max() / 3);
        for m in 0..8 {
            let lambda = Complex64::from_polar((m + 1) as f64 / 8.0, 0.7 * k as f64 + 1.3 * m as f64);
            let superop = superop_characteristic_function(&rho, lambda, wide)?.value;
            let direct = characteristic_function(&rho, lambda)?.value;
            worst = worst.max((superop - direct).norm());
        }
    }
    checks.push(IdentityCheck::new("characteristic_function", worst, 1e-8));

    let mut worst = 0.0_f64;
    for k in 0..20 {
        let o = random_operator(&mut rng, wide.dim(), wide.n_max() - 18);
        let lambda = Complex64::from_polar(0.5 * rng.random::<f64>(), 0.37 * k as f64);
        let back = superop_weyl_apply(-lambda, &superop_weyl_apply(lambda, &o, wide)?, wide)?;
        worst = worst.max(block_max(&(back - &o), wide.n_max() - 4));
    }
    checks.push(IdentityCheck::new("weyl_inverse", worst, 1e-8));

    let grid = s.grid;
    let vacuum = wigner(&(basis.fock_state(0)? * basis.fock_state(0)?.adjoint()), &grid)?;
    let err = grid
        .nodes()
        .zip(&vacuum.values)
        .map(|(a, v)| (v - 2.0 / std::f64::consts::PI * (-2.0 * a.norm_sqr()).exp()).abs())
        .fold(0.0, f64::max);
    checks.push(IdentityCheck::new("wigner_vacuum", err, 1e-6));

    // Reference trajectory and wave-equation run.
    let oracle = oracle_run(&s, &s.times)?;
    let swe = swe_run(&s, &s.times)?;
    let states: Vec<CompositeState> = snapshots(&oracle.states, options.snapshots);

    let (mut marginal, mut routes, mut sharp_m, mut coarse_m, mut photons) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let observables = monomials(s.space.atom_dim());
    for psi in &states {
        let rho = density_operator(psi);
        let field = partial_trace_atom(&rho, s.space)?;
        let sharp = sharp_density(&rho, s.space, &grid)?;
        let traced = sharp.trace_function(PhaseKind::Wigner);
        marginal = marginal.max(traced.linf_distance(&wigner(&field, &grid)?)?);
        let direct = husimi_density(&rho, s.space, &grid)?;
        let smoothed = sharp.coarse_grain_with(&options.kernel, &grid)?;
        routes = routes.max(smoothed.linf_distance(&direct)?);
        for f in &observables {
            let exact = symmetric_moment_oracle(f, &rho, basis)?;
            sharp_m = sharp_m.max((semiclassical_expectation(f, &sharp)? - exact).norm());
            let fbar = f.coarse_grain_with(&options.kernel, &grid)?;
            let quantum = symmetric_moment_oracle(&fbar, &rho, basis)?;
            coarse_m = coarse_m
                .max((semiclassical_expectation(f, &direct)? - quantum).norm())
                .max((semiclassical_expectation(&fbar, &sharp)? - quantum).norm());
        }
        let q = husimi(&field, &grid)?;
        photons = photons.max((photon_number_from_husimi(&q)? - psi.photon_number()).abs());
    }
    checks.push(IdentityCheck::new("sharp_density_marginal", marginal, 1e-8));
    checks.push(IdentityCheck::new("husimi_two_routes", routes, 5e-4));
    checks.push(IdentityCheck::new("sharp_moments", sharp_m, 1e-5));
    checks.push(IdentityCheck::new("coarse_grained_moments", coarse_m, 1e-5));
    checks.push(IdentityCheck::new("eq19", photons, 1e-4));

    let (mut linf, mut probability, mut moments, mut atomic) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut tolerance = 0.0_f64;
    for (wave, psi) in swe.states.iter().zip(&oracle.states) {
        let cmp_grid = comparison_grid(&s, wave);
        tolerance = tolerance.max(cmp_grid.tol_grid());
        let report = compare_to_oracle(wave, psi, &cmp_grid)?;
        linf = linf.max(match s.backend {
            Backend::Bargmann => report.linf,
            Backend::Grid => report.linf / report.max_value,
        });
        moments = report.moments.values().fold(moments, |m, d| m.max(d.delta));
        let sampled = on_grid(&s, wave)?;
        probability = probability.max((field_density(&sampled)?.integral() - 1.0).abs());
        let reduced = partial_trace_field(&density_operator(psi), s.space)?;
        atomic = atomic.max(max_abs(&(wave_density(&sampled)?.integral() - reduced)));
        let one = swe_expectation(&sampled, &SemiclassicalObservable::one())?;
        probability = probability.max((one.re - 1.0).abs());
    }
    let equivalence_limit = match s.backend {
        Backend::Bargmann => 1e-7,
        Backend::Grid => 1e-3,
    };
    checks.push(IdentityCheck::new("swe_density_equivalence", linf, equivalence_limit));
    checks.push(IdentityCheck::new("total_probability", probability, tolerance));
    checks.push(IdentityCheck::new("swe_expectations", moments, 1e-5));
    checks.push(IdentityCheck::new("atomic_marginal", atomic, tolerance));
    Ok(checks)
}
