//! Monte-Carlo draws of the classical field from the wave's density.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::wave::{field_density, FieldSample, SemiclassicalWave};
use crate::error::{Error, Result};
use crate::linalg::re;

/// Discrete inverse-CDF sampler over the nodes of a grid density: a row
/// (x index) from the row marginals, then a column within that row.
#[derive(Debug, Clone)]
pub struct NodeSampler {
    points: usize,
    row_cdf: Vec<f64>,
    col_cdf: Vec<Vec<f64>>,
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn pick(cdf: &[f64], u: f64) -> usize {
    let target = u * cdf[cdf.len() - 1];
    cdf.partition_point(|&c| c <= target).min(cdf.len() - 1)
}

impl NodeSampler {
    /// `values[i * points + j]` are nonnegative node weights, not necessarily normalized.
    pub fn new(points: usize, values: &[f64]) -> Result<Self> {
        if values.len() != points * points || values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter("node weights must be finite and nonnegative".into()));
        }
        let col_cdf: Vec<Vec<f64>> = values.chunks(points).map(|row| cumulative(row.iter().copied())).collect();
        let row_cdf = cumulative(col_cdf.iter().map(|c| c[points - 1]));
        if row_cdf[points - 1] <= 0.0 {
            return Err(Error::VanishingNorm { norm: 0.0 });
        }
        Ok(Self { points, row_cdf, col_cdf })
    }

    /// Node index for two uniform variates in `[0, 1)`.
    pub fn node(&self, u_row: f64, u_col: f64) -> usize {
        let i = pick(&self.row_cdf, u_row);
        let j = pick(&self.col_cdf[i], u_col);
        i * self.points + j
    }
}

/// Draws `count` field values from `||ψ(a)||²` with their conditional atomic
/// states. Sample `k` uses its own stream `k` of a generator seeded by `seed`,
/// so results do not depend on thread scheduling.
pub fn sample_field(wave: &SemiclassicalWave, count: usize, seed: u64) -> Result<Vec<FieldSample>> {
    let density = field_density(wave)?;
    let grid = density.grid;
    let sampler = NodeSampler::new(grid.points(), &density.values)?;
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let node = sampler.node(rng.random(), rng.random());
            let psi = wave.node_value(node)?;
            let norm = psi.norm();
            if norm <= 1e-12 {
                return Err(Error::VanishingNorm { norm });
            }
            Ok(FieldSample {
                a: grid.node(node),
                conditional_state: psi / re(norm),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;
    use crate::phasespace::PhaseGrid;
    use crate::swe::wave::{initial_wave, Support};

    #[test]
    fn sampler_follows_weights() {
        let mut w = vec![0.0; 32 * 32];
        w[5 * 32 + 7] = 1.0;
        w[20 * 32 + 1] = 3.0;
        let s = NodeSampler::new(32, &w).unwrap();
        assert_eq!(s.node(0.1, 0.5), 5 * 32 + 7);
        assert_eq!(s.node(0.3, 0.99), 20 * 32 + 1);
        assert_eq!(s.node(0.0, 0.0), 5 * 32 + 7);
    }

    #[test]
    fn vacuum_second_moment_and_determinism() {
        let psi = CVector::from_vec(vec![re(1.0), re(0.0)]);
        let w = initial_wave(&psi, Support::Grid(PhaseGrid::default())).unwrap();
        let s = sample_field(&w, 100_000, 7).unwrap();
        let mean = s.iter().map(|x| x.a.norm_sqr()).sum::<f64>() / s.len() as f64;
        assert!((mean - 1.0).abs() < 0.02, "{mean}");
        assert!(s.iter().all(|x| (x.conditional_state.norm() - 1.0).abs() < 1e-12));
        let again = sample_field(&w, 1000, 7).unwrap();
        assert_eq!(&s[..1000], &again[..]);
        let other = sample_field(&w, 1000, 8).unwrap();
        assert_ne!(&s[..1000], &other[..]);
    }
}
