//! Gaussian base kernel on discretized signals and bandwidth selection.

use crate::error::{Error, Result};
use crate::signal::DiscretizedSignal;

/// Gaussian kernel `k(x, y) = exp(-‖x-y‖² / (2σ²))` on the discretized L²
/// geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    sigma: f64,
}

impl GaussianKernel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "bandwidth must be positive, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eval(&self, x: &DiscretizedSignal, y: &DiscretizedSignal) -> Result<f64> {
        x.same_grid(y)?;
        let sum: f64 = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let d2 = x.grid().step() * sum;
        Ok((-d2 / (2.0 * self.sigma * self.sigma)).exp())
    }

    /// Kernel value from precomputed raw sums: `sum_sq_*` are `Σ v²` without
    /// the grid weight, `dot` is `Σ x_k y_k`. Used by the Gram builders so
    /// per-signal norms are computed once.
    pub(crate) fn eval_raw_sums(&self, sum_sq_x: f64, sum_sq_y: f64, dot: f64, step: f64) -> f64 {
        let d2 = (step * (sum_sq_x + sum_sq_y - 2.0 * dot)).max(0.0);
        (-d2 / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Median of the `N(N-1)/2` pairwise L² distances of the pool. For an even
/// count of distances, the mean of the two central order statistics.
pub fn median_heuristic(pool: &[DiscretizedSignal]) -> Result<f64> {
    if pool.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "median heuristic needs at least 2 signals, got {}",
            pool.len()
        )));
    }
    let mut dists = Vec::with_capacity(pool.len() * (pool.len() - 1) / 2);
    for i in 0..pool.len() {
        for j in (i + 1)..pool.len() {
            dists.push(pool[i].l2_dist(&pool[j])?);
        }
    }
    dists.sort_by(f64::total_cmp);
    let n = dists.len();
    let median = if n % 2 == 1 {
        dists[n / 2]
    } else {
        0.5 * (dists[n / 2 - 1] + dists[n / 2])
    };
    if median <= 0.0 {
        return Err(Error::DegeneratePool);
    }
    Ok(median)
}
