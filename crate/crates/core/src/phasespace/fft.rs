//! Two-dimensional FFT over the x-major node layout of a [`PhaseGrid`].

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse plans for an `M × M` array. Transforms are unnormalized.
#[derive(Clone)]
pub struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("n", &self.n).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    fn plan(&self, dir: Direction) -> &Arc<dyn Fft<f64>> {
        match dir {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        }
    }

    /// Transforms along the contiguous (second) index.
    pub fn rows(&self, data: &mut [C64], dir: Direction) {
        let plan = self.plan(dir);
        data.par_chunks_mut(self.n).for_each(|row| plan.process(row));
    }

    /// Transforms along the strided (first) index.
    pub fn columns(&self, data: &mut [C64], dir: Direction) {
        transpose(data, self.n);
        self.rows(data, dir);
        transpose(data, self.n);
    }

    pub fn both(&self, data: &mut [C64], dir: Direction) {
        self.rows(data, dir);
        self.columns(data, dir);
    }
}

fn transpose(data: &mut [C64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_then_inverse_is_scaled_identity() {
        let n = 8;
        let data: Vec<C64> = (0..n * n).map(|k| C64::new(k as f64, (k % 3) as f64)).collect();
        let mut work = data.clone();
        let fft = Fft2::new(n);
        fft.both(&mut work, Direction::Forward);
        fft.both(&mut work, Direction::Inverse);
        for (a, b) in work.iter().zip(&data) {
            assert!((a / (n * n) as f64 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn columns_transform_the_first_index() {
        let n = 4;
        // f(i, j) = δ_{i,1}: its transform along i is e^{-2πi k/4}, independent of j.
        let mut data = vec![C64::default(); n * n];
        for j in 0..n {
            data[n + j] = C64::new(1.0, 0.0);
        }
        Fft2::new(n).columns(&mut data, Direction::Forward);
        for k in 0..n {
            let expected = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / 4.0);
            for j in 0..n {
                assert!((data[k * n + j] - expected).norm() < 1e-12);
            }
        }
    }
}
