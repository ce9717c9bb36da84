mod common;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use swe_core::fockspace::{partial_trace_field, CompositeSpace};
use swe_core::linalg::re;
use swe_core::phasespace::husimi_density;
use swe_core::swe::{
    compare_to_oracle, conditional_state, evaluate_on_grid, evolve_bargmann, field_density, initial_wave, sample_field,
    swe_expectation, wave_density, write_wave_csv, DerivativeScheme, GridSolver, Support,
};
use swe_core::unitary::{density_operator, evolve_unitary, product_initial_state, AtomFieldModel, TimeGrid};
use swe_core::{CompositeState, PhaseGrid, SemiclassicalObservable};

fn model() -> AtomFieldModel {
    AtomFieldModel::two_level(1.0, 0.0, 1.0).unwrap()
}

fn start() -> CompositeState {
    let b = common::basis(8);
    product_initial_state(&common::excited(), &b.fock_state(0).unwrap(), CompositeSpace::new(2, b).unwrap()).unwrap()
}

fn bargmann_at(t: f64) -> swe_core::SemiclassicalWave {
    let times = TimeGrid::covering(0.0, t, 1e-3, usize::MAX).unwrap();
    let w = initial_wave(&common::excited(), Support::Bargmann(common::basis(8))).unwrap();
    evolve_bargmann(&model(), &w, &times).unwrap().last().unwrap().1.clone()
}

#[test]
fn field_density_follows_the_rabi_profile() {
    let grid = PhaseGrid::default();
    for t in [0.0, 0.4, PI / 2.0, 2.5] {
        let w = if t == 0.0 {
            initial_wave(&common::excited(), Support::Grid(grid)).unwrap()
        } else {
            evaluate_on_grid(&bargmann_at(t), &grid).unwrap()
        };
        let rho = field_density(&w).unwrap();
        let err = grid
            .nodes()
            .zip(&rho.values)
            .map(|(a, v)| {
                let x = a.norm_sqr();
                (v - (-x).exp() / PI * (t.cos().powi(2) + x * t.sin().powi(2))).abs()
            })
            .fold(0.0, f64::max);
        assert!(err <= grid.tol_grid(), "t={t}: {err}");
        assert!((rho.integral() - 1.0).abs() <= grid.tol_grid());
        assert!(rho.min() >= 0.0);
    }
}

#[test]
fn conditional_states_of_the_rabi_wave() {
    let s = conditional_state(&bargmann_at(PI / 4.0), C64::default()).unwrap();
    assert!((s.conditional_state[0].norm() - 1.0).abs() < 1e-9);
    let s = conditional_state(&bargmann_at(PI / 2.0), re(1.0)).unwrap();
    assert!((s.conditional_state[1].norm() - 1.0).abs() < 1e-9);
}

#[test]
fn atomic_marginal_is_the_reduced_state() {
    let grid = PhaseGrid::default();
    let times = TimeGrid::covering(0.0, 1.3, 1e-3, usize::MAX).unwrap();
    let oracle = evolve_unitary(&model(), &start(), &times).unwrap();
    let psi = oracle.last().unwrap().1;
    let w = evaluate_on_grid(&bargmann_at(1.3), &grid).unwrap();
    let marginal = wave_density(&w).unwrap().integral();
    let reduced = partial_trace_field(&density_operator(psi), psi.space()).unwrap();
    assert!((marginal - reduced).iter().all(|z| z.norm() < 1e-8));
}

#[test]
fn backends_agree_over_a_full_period() {
    let grid = PhaseGrid::new(8.0, 64).unwrap();
    let times = TimeGrid::covering(0.0, 2.0 * PI, 1e-3, 1000).unwrap();
    let grid_run = GridSolver::new(grid, DerivativeScheme::Spectral)
        .evolve(&model(), &initial_wave(&common::excited(), Support::Grid(grid)).unwrap(), &times)
        .unwrap();
    let wave = initial_wave(&common::excited(), Support::Bargmann(common::basis(8))).unwrap();
    let bargmann_run = evolve_bargmann(&model(), &wave, &times).unwrap();
    let oracle = evolve_unitary(&model(), &start(), &times).unwrap();
    for ((g, b), psi) in grid_run.states.iter().zip(&bargmann_run.states).zip(&oracle.states) {
        let b = evaluate_on_grid(b, &grid).unwrap();
        let scale = b.max_norm().unwrap();
        let (x, y) = (g.components().unwrap(), b.components().unwrap());
        let err = x
            .iter()
            .zip(y)
            .flat_map(|(p, q)| p.iter().zip(q).map(|(u, v)| (u - v).norm()))
            .fold(0.0, f64::max);
        assert!(err <= 1e-3 * scale, "t={}: {err}", g.time());
        let report = compare_to_oracle(g, psi, &grid).unwrap();
        assert!(report.linf <= 1e-3 * report.max_value);
        assert!((g.total_probability() - 1.0).abs() <= grid.tol_grid());
    }
}

#[test]
fn oracle_keeps_norm_and_truncation() {
    let times = TimeGrid::covering(0.0, 2.0 * PI, 1e-3, 500).unwrap();
    let run = evolve_unitary(&model(), &start(), &times).unwrap();
    for s in &run.states {
        assert!((s.norm() - 1.0).abs() <= 1e-9);
        assert!(s.top_level_weight() < 1e-10);
    }
}

#[test]
fn swe_moments_follow_the_oracle() {
    let grid = PhaseGrid::default();
    let times = TimeGrid::covering(0.0, 2.0, 1e-3, 400).unwrap();
    let oracle = evolve_unitary(&model(), &start(), &times).unwrap();
    let wave = initial_wave(&common::excited(), Support::Bargmann(common::basis(8))).unwrap();
    let run = evolve_bargmann(&model(), &wave, &times).unwrap();
    for (w, psi) in run.states.iter().zip(&oracle.states) {
        let on_grid = evaluate_on_grid(w, &grid).unwrap();
        let second = swe_expectation(&on_grid, &SemiclassicalObservable::abs_sq()).unwrap().re;
        assert!((second - 1.0 - psi.photon_number()).abs() < 1e-5);
        let report = compare_to_oracle(w, psi, &grid).unwrap();
        assert!(report.moments.values().all(|m| m.delta < 1e-8));
        let q = husimi_density(&density_operator(psi), psi.space(), &grid).unwrap();
        assert!(wave_density(&on_grid).unwrap().linf_distance(&q).unwrap() < 1e-10);
    }
}

#[test]
fn monte_carlo_error_shrinks_like_inverse_root_n() {
    let grid = PhaseGrid::default();
    let w = evaluate_on_grid(&bargmann_at(PI / 4.0), &grid).unwrap();
    let exact = swe_expectation(&w, &SemiclassicalObservable::abs_sq()).unwrap().re;
    // Root-mean-square error over independent seeds at each sample size.
    let mut rms = Vec::new();
    for n in [1_000, 10_000, 100_000] {
        let seeds = 16;
        let mse: f64 = (0..seeds)
            .map(|seed| {
                let s = sample_field(&w, n, 100 + seed).unwrap();
                let mean = s.iter().map(|x| x.a.norm_sqr()).sum::<f64>() / n as f64;
                (mean - exact).powi(2)
            })
            .sum::<f64>()
            / seeds as f64;
        rms.push(mse.sqrt());
    }
    for pair in rms.windows(2) {
        let ratio = pair[0] / pair[1];
        // sqrt(10) ≈ 3.16; 16 seeds leave roughly ±35% spread on each estimate
        assert!((1.5..7.0).contains(&ratio), "{rms:?}");
    }
}

#[test]
fn wave_csv_has_metadata_and_components() {
    let grid = PhaseGrid::new(4.0, 32).unwrap();
    let w = initial_wave(&common::excited(), Support::Grid(grid)).unwrap();
    let mut buf = Vec::new();
    write_wave_csv(&w, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# kind=swe-wave extent=4.0 points=32 atom_dim=2"));
    assert_eq!(lines.next().unwrap(), "x,y,re_0,im_0,re_1,im_1");
    assert_eq!(lines.count(), 32 * 32);
}
