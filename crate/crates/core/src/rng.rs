//! Seeded random stream shared by every stochastic step of a run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible source of uniform draws.
///
/// Two streams built from the same seed yield the same sequence on every
/// platform, which is what makes runs and experiment cells replayable.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform real on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform real on `[low, high)`. Requires `low < high`.
    pub fn uniform_range(&mut self, low: f64, high: f64) -> f64 {
        self.inner.random_range(low..high)
    }

    /// Uniform integer on `{0, ..., n - 1}`. Requires `n >= 1`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// `k` distinct integers from `{0, ..., n - 1} \ {exclude}` in random
    /// order, or `None` if fewer than `k` candidates exist.
    pub fn distinct_excluding(&mut self, n: usize, k: usize, exclude: usize) -> Option<Vec<usize>> {
        let mut pool: Vec<usize> = (0..n).filter(|&i| i != exclude).collect();
        if pool.len() < k {
            return None;
        }
        // partial Fisher-Yates
        for i in 0..k {
            let j = i + self.index(pool.len() - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        Some(pool)
    }
}
