//! Unbiased MMD² U-statistic and permutation calibration.
//!
//! The pooled Gram matrix is computed once per repetition; permuted
//! statistics only reindex it, so calibration costs `O(B·N²)` after the
//! `O(N²)` kernel evaluations.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{self, AveragedKernelSpec, OrbitSamples};
use crate::kernel::GaussianKernel;
use crate::seeding;
use crate::signal::DiscretizedSignal;

/// Kernel used to fill a pooled Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Base(GaussianKernel),
    Averaged(AveragedKernelSpec),
}

/// Symmetric pooled kernel matrix; the first `n` indices belong to sample X,
/// the remaining `m` to sample Y.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl GramMatrix {
    pub fn new(n: usize, m: usize, data: Vec<f64>) -> Result<Self> {
        let size = n + m;
        if size == 0 {
            return Err(Error::EmptyInput);
        }
        if data.len() != size * size {
            return Err(Error::InvalidConfig(format!(
                "gram matrix for {size} signals needs {} entries, got {}",
                size * size,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "gram entries must be finite".to_string(),
            ));
        }
        for i in 0..size {
            for j in (i + 1)..size {
                if (data[i * size + j] - data[j * size + i]).abs() > 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "gram matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, m, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.n + self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size() + j]
    }
}

/// Outcome of a permutation-calibrated test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub mmd2: f64,
    pub p_value: f64,
    pub reject: bool,
    pub b: usize,
    pub alpha: f64,
    pub seed: u64,
}

fn check_permutation(gram: &GramMatrix, perm: &[usize]) -> Result<()> {
    let size = gram.size();
    if perm.len() != size {
        return Err(Error::InvalidConfig(format!(
            "permutation has length {}, expected {size}",
            perm.len()
        )));
    }
    let mut seen = vec![false; size];
    for &i in perm {
        if i >= size || seen[i] {
            return Err(Error::InvalidConfig(
                "index list is not a permutation".to_string(),
            ));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Unbiased MMD² U-statistic on the relabeled Gram matrix. The first `n`
/// permuted positions form pseudo-X, the rest pseudo-Y; diagonal entries are
/// never used in the within-sample terms.
///
/// Sums accumulate over the upper triangle in pool order, so the result is a
/// bitwise function of the induced split: permutations with the same split
/// tie exactly in the calibration below.
pub fn mmd2_ustat(gram: &GramMatrix, perm: &[usize]) -> Result<f64> {
    let (n, m) = (gram.n(), gram.m());
    if n < 2 || m < 2 {
        return Err(Error::SampleTooSmall { n, m });
    }
    check_permutation(gram, perm)?;
    let size = gram.size();
    let mut in_x = vec![false; size];
    for &i in &perm[..n] {
        in_x[i] = true;
    }

    let mut xx = 0.0;
    let mut yy = 0.0;
    let mut xy = 0.0;
    for i in 0..size {
        for j in (i + 1)..size {
            let g = gram.get(i, j);
            match (in_x[i], in_x[j]) {
                (true, true) => xx += g,
                (false, false) => yy += g,
                _ => xy += g,
            }
        }
    }
    Ok(2.0 * xx / (n as f64 * (n - 1) as f64) + 2.0 * yy / (m as f64 * (m - 1) as f64)
        - 2.0 * xy / (n as f64 * m as f64))
}

/// Permutation test over an explicit list of permutations. The p-value is
/// `(1 + #{b : stat_b ≥ stat}) / (B + 1)` with ties counted as exceedances,
/// and the null is rejected when `p ≤ α`.
pub fn permutation_test_with(
    gram: &GramMatrix,
    perms: &[Vec<usize>],
    alpha: f64,
    seed: u64,
) -> Result<TestReport> {
    if perms.is_empty() {
        return Err(Error::InvalidConfig(
            "need at least one permutation".to_string(),
        ));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let identity: Vec<usize> = (0..gram.size()).collect();
    let observed = mmd2_ustat(gram, &identity)?;
    let permuted: Vec<f64> = perms
        .iter()
        .map(|perm| mmd2_ustat(gram, perm))
        .collect::<Result<_>>()?;
    let p_value = p_value_from_stats(observed, &permuted);
    Ok(TestReport {
        mmd2: observed,
        p_value,
        reject: p_value <= alpha,
        b: perms.len(),
        alpha,
        seed,
    })
}

/// `b` permutations of `0..size` drawn uniformly (with replacement, identity
/// allowed) from the symmetric group, seeded deterministically.
pub(crate) fn draw_permutations(size: usize, b: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = seeding::derive_rng(seed, &[seeding::STREAM_PERM]);
    let identity: Vec<usize> = (0..size).collect();
    (0..b)
        .map(|_| {
            let mut p = identity.clone();
            p.shuffle(&mut rng);
            p
        })
        .collect()
}

/// The permutation p-value formula shared by all calibrations.
pub(crate) fn p_value_from_stats(observed: f64, permuted: &[f64]) -> f64 {
    let exceed = permuted.iter().filter(|&&s| s >= observed).count();
    (1 + exceed) as f64 / (permuted.len() + 1) as f64
}

/// Permutation test with `b` permutations drawn uniformly (with replacement,
/// identity allowed) from the symmetric group, seeded deterministically.
pub fn permutation_test(gram: &GramMatrix, b: usize, alpha: f64, seed: u64) -> Result<TestReport> {
    if b == 0 {
        return Err(Error::InvalidConfig(
            "need at least one permutation".to_string(),
        ));
    }
    let perms = draw_permutations(gram.size(), b, seed);
    permutation_test_with(gram, &perms, alpha, seed)
}

/// Pooled Gram matrix: entry `(i, j)` is the kernel value for `pool[i]`,
/// `pool[j]`. The first `n` pool entries are labeled sample X. For the
/// averaged kernel, shift draws are taken from `orbit` when provided and
/// derived from the spec seed otherwise.
pub fn build_gram(
    pool: &[DiscretizedSignal],
    n: usize,
    spec: &KernelSpec,
    orbit: Option<&[OrbitSamples]>,
) -> Result<GramMatrix> {
    let Some(first) = pool.first() else {
        return Err(Error::EmptyInput);
    };
    if n > pool.len() {
        return Err(Error::InvalidConfig(format!(
            "sample X size {n} exceeds pool size {}",
            pool.len()
        )));
    }
    for s in pool {
        s.same_grid(first)?;
    }
    let size = pool.len();
    let mut data = vec![0.0; size * size];

    match spec {
        KernelSpec::Base(kernel) => {
            let sum_sq: Vec<f64> = pool
                .iter()
                .map(|s| s.values().iter().map(|v| v * v).sum())
                .collect();
            let step = first.grid().step();
            let pairs: Vec<(usize, usize)> =
                (0..size).flat_map(|i| (i..size).map(move |j| (i, j))).collect();
            let entries: Vec<f64> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    let dot: f64 = pool[i]
                        .values()
                        .iter()
                        .zip(pool[j].values())
                        .map(|(a, b)| a * b)
                        .sum();
                    kernel.eval_raw_sums(sum_sq[i], sum_sq[j], dot, step)
                })
                .collect();
            for (&(i, j), &v) in pairs.iter().zip(&entries) {
                data[i * size + j] = v;
                data[j * size + i] = v;
            }
        }
        KernelSpec::Averaged(aspec) => {
            let built;
            let orbit = match orbit {
                Some(o) => o,
                None => {
                    built = group::build_orbit_samples(pool, aspec)?;
                    &built
                }
            };
            if orbit.len() != size {
                return Err(Error::InvalidConfig(format!(
                    "got {} orbit samples for {} signals",
                    orbit.len(),
                    size
                )));
            }
            let mode = aspec.action.shift_mode();
            let sets: Vec<group::ShiftedSet> = pool
                .par_iter()
                .zip(orbit.par_iter())
                .map(|(x, s)| {
                    if s.shifts.len() != aspec.mc_budget {
                        return Err(Error::InvalidConfig(format!(
                            "orbit sample has {} shifts, spec expects {}",
                            s.shifts.len(),
                            aspec.mc_budget
                        )));
                    }
                    Ok(group::shifted_set(x, s, mode))
                })
                .collect::<Result<_>>()?;
            let step = first.grid().step();
            let pairs: Vec<(usize, usize)> =
                (0..size).flat_map(|i| (i..size).map(move |j| (i, j))).collect();
            let entries: Vec<f64> = pairs
                .par_iter()
                .map(|&(i, j)| group::averaged_entry(&aspec.base, step, &sets[i], &sets[j]))
                .collect();
            for (&(i, j), &v) in pairs.iter().zip(&entries) {
                data[i * size + j] = v;
                data[j * size + i] = v;
            }
        }
    }
    GramMatrix::new(n, size - n, data)
}
