//! Weighted group averaging of the base kernel.
//!
//! For a compact shift group (circular shifts of periodic signals) the Haar
//! measure normalizes to the uniform distribution and the plain average
//! works. For real-line shifts the Haar measure is infinite, so the kernel is
//! weighted by the Gaussian-window energy functional
//! `ρ_c(x) = ∫ x²(u) exp(-u²/(2c²)) du` before averaging. Both cases reduce to
//! the same Monte Carlo form: draw `S` shifts per signal from the orbit
//! distribution `ν_x(dg) ∝ ρ(φ_g x) dλ(g)`, and approximate
//!
//! `k̄(x, y) = w̃(x)·w̃(y)/S² · Σ_r Σ_s k(φ_{g_r} x, φ_{h_s} y)`.
//!
//! Shifts are drawn once per signal and reused for every kernel evaluation
//! involving that signal, so a pooled Gram matrix is an exact inner-product
//! matrix of averaged feature vectors and stays positive semidefinite.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::kernel::GaussianKernel;
use crate::seeding;
use crate::signal::{DiscretizedSignal, ShiftMode};

/// Shift group acting on signals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupAction {
    /// Circular shifts of a `period`-periodic signal (compact group).
    CircularShift { period: f64 },
    /// Translations of the real line (non-compact group); signals are
    /// extended by zero outside their window.
    RealLineShift,
}

impl GroupAction {
    pub(crate) fn shift_mode(&self) -> ShiftMode {
        match self {
            GroupAction::CircularShift { .. } => ShiftMode::PeriodicWrap,
            GroupAction::RealLineShift => ShiftMode::ZeroPad,
        }
    }
}

/// Weighting function paired with the group action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightConfig {
    /// `ρ ≡ 1` with the Haar measure normalized to a probability; only valid
    /// for compact groups.
    Unit,
    /// Gaussian window `ρ_c` of width `c`; required for real-line shifts.
    GaussianWindow { c: f64 },
}

/// Configuration of the Monte Carlo averaged kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedKernelSpec {
    pub base: GaussianKernel,
    pub action: GroupAction,
    pub weight: WeightConfig,
    /// Number of shift samples `S` per signal.
    pub mc_budget: usize,
    pub rng_seed: u64,
}

impl AveragedKernelSpec {
    pub fn new(
        base: GaussianKernel,
        action: GroupAction,
        weight: WeightConfig,
        mc_budget: usize,
        rng_seed: u64,
    ) -> Result<Self> {
        match (&action, &weight) {
            (GroupAction::CircularShift { period }, WeightConfig::Unit) => {
                if !period.is_finite() || *period <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "circular shift period must be positive, got {period}"
                    )));
                }
            }
            (GroupAction::RealLineShift, WeightConfig::GaussianWindow { c }) => {
                if !c.is_finite() || *c <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "window width c must be positive, got {c}"
                    )));
                }
            }
            _ => {
                return Err(Error::InvalidConfig(
                    "unit weight pairs with circular shifts, Gaussian window with \
                     real-line shifts"
                        .to_string(),
                ));
            }
        }
        if mc_budget == 0 {
            return Err(Error::InvalidConfig(
                "Monte Carlo budget S must be at least 1".to_string(),
            ));
        }
        Ok(Self {
            base,
            action,
            weight,
            mc_budget,
            rng_seed,
        })
    }
}

/// Per-signal shift draws and orbit weight.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSamples {
    pub signal_index: usize,
    /// `S` i.i.d. draws from `ν_x`.
    pub shifts: Vec<f64>,
    /// Approximated orbit weight `w̃(x)`.
    pub weight: f64,
}

/// Discretized Gaussian-window functional
/// `(T/(p-1)) · Σ_k x²(t_k) exp(-t_k²/(2c²))`.
pub fn rho_c_discrete(x: &DiscretizedSignal, c: f64) -> f64 {
    let inv = 1.0 / (2.0 * c * c);
    let sum: f64 = x
        .grid()
        .points()
        .zip(x.values())
        .map(|(t, &v)| v * v * (-t * t * inv).exp())
        .sum();
    x.grid().step() * sum
}

/// Orbit weight `w̃(x)`: 1 for the unit weight (normalized Haar), and
/// `√(2π)·c·(T/(p-1))·Σ x²(t_k)` for the Gaussian window.
pub fn orbit_weight(x: &DiscretizedSignal, spec: &AveragedKernelSpec) -> f64 {
    match spec.weight {
        WeightConfig::Unit => 1.0,
        WeightConfig::GaussianWindow { c } => {
            let sum: f64 = x.values().iter().map(|v| v * v).sum();
            (2.0 * std::f64::consts::PI).sqrt() * c * x.grid().step() * sum
        }
    }
}

/// Draw `S` shifts from `ν_x` for the signal at `signal_index`, deriving the
/// RNG stream from `spec.rng_seed` and the index. Two calls with the same
/// seed and index produce identical draws.
///
/// For the circular action, `ν_x` is uniform on `[0, period)`. For the
/// Gaussian window, the density of `ν_x` at shift `τ` is proportional to
/// `Σ_k x²(t_k) exp(-(t_k + τ)²/(2c²))`: component `k` is picked with
/// probability `∝ x²(t_k)` and `τ ~ Normal(-t_k, c)`.
pub fn sample_nu_x(
    x: &DiscretizedSignal,
    spec: &AveragedKernelSpec,
    signal_index: usize,
) -> Result<OrbitSamples> {
    let mut rng = seeding::derive_rng(
        spec.rng_seed,
        &[seeding::STREAM_SHIFTS, signal_index as u64],
    );
    let shifts = match (spec.action, spec.weight) {
        (GroupAction::CircularShift { period }, WeightConfig::Unit) => (0..spec.mc_budget)
            .map(|_| rng.random_range(0.0..period))
            .collect(),
        (GroupAction::RealLineShift, WeightConfig::GaussianWindow { c }) => {
            let energies: Vec<f64> = x.values().iter().map(|v| v * v).collect();
            let mut cum = Vec::with_capacity(energies.len());
            let mut total = 0.0;
            for e in &energies {
                total += e;
                cum.push(total);
            }
            if total <= 0.0 {
                return Err(Error::DegenerateSignal);
            }
            let mut draws = Vec::with_capacity(spec.mc_budget);
            for _ in 0..spec.mc_budget {
                let u = rng.random_range(0.0..total);
                let k = cum.partition_point(|&s| s <= u).min(energies.len() - 1);
                let normal = Normal::new(-x.grid().point(k), c)
                    .map_err(|e| Error::InvalidConfig(e.to_string()))?;
                draws.push(normal.sample(&mut rng));
            }
            draws
        }
        _ => unreachable!("validated in AveragedKernelSpec::new"),
    };
    Ok(OrbitSamples {
        signal_index,
        shifts,
        weight: orbit_weight(x, spec),
    })
}

/// Shift draws for every signal of a pool. Under the Gaussian window a
/// zero-energy signal gets weight 0 and placeholder shifts, so its averaged
/// kernel row vanishes and downstream tests still run.
pub fn build_orbit_samples(
    pool: &[DiscretizedSignal],
    spec: &AveragedKernelSpec,
) -> Result<Vec<OrbitSamples>> {
    let Some(first) = pool.first() else {
        return Err(Error::EmptyInput);
    };
    for s in pool {
        s.same_grid(first)?;
    }
    if let GroupAction::CircularShift { period } = spec.action {
        if period != first.grid().span() {
            return Err(Error::InvalidConfig(format!(
                "circular period {period} does not match the grid span {}",
                first.grid().span()
            )));
        }
    }
    pool.iter()
        .enumerate()
        .map(|(i, x)| match sample_nu_x(x, spec, i) {
            Ok(s) => Ok(s),
            Err(Error::DegenerateSignal) => Ok(OrbitSamples {
                signal_index: i,
                shifts: vec![0.0; spec.mc_budget],
                weight: 0.0,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Shifted variants of one signal with their raw squared sums, the cached
/// form consumed by the block sum below.
pub(crate) struct ShiftedSet {
    pub(crate) variants: Vec<Vec<f64>>,
    pub(crate) sum_sq: Vec<f64>,
    pub(crate) weight: f64,
}

pub(crate) fn shifted_set(
    x: &DiscretizedSignal,
    samples: &OrbitSamples,
    mode: ShiftMode,
) -> ShiftedSet {
    let variants: Vec<Vec<f64>> = samples
        .shifts
        .iter()
        .map(|&g| x.shift(g, mode).values().to_vec())
        .collect();
    let sum_sq = variants
        .iter()
        .map(|v| v.iter().map(|a| a * a).sum())
        .collect();
    ShiftedSet {
        variants,
        sum_sq,
        weight: samples.weight,
    }
}

/// `w̃(x)·w̃(y)/S² · Σ_r Σ_s k(φ_{g_r} x, φ_{h_s} y)` over two cached sets.
pub(crate) fn averaged_entry(
    base: &GaussianKernel,
    step: f64,
    xs: &ShiftedSet,
    ys: &ShiftedSet,
) -> f64 {
    let mut acc = 0.0;
    for (xv, &nx) in xs.variants.iter().zip(&xs.sum_sq) {
        for (yv, &ny) in ys.variants.iter().zip(&ys.sum_sq) {
            let dot: f64 = xv.iter().zip(yv).map(|(a, b)| a * b).sum();
            acc += base.eval_raw_sums(nx, ny, dot, step);
        }
    }
    let s = xs.variants.len() as f64;
    xs.weight * ys.weight * acc / (s * s)
}

/// Monte Carlo averaged kernel for one pair of signals, using the shift
/// draws in `sx` and `sy`.
pub fn averaged_kernel_eval(
    spec: &AveragedKernelSpec,
    x: &DiscretizedSignal,
    sx: &OrbitSamples,
    y: &DiscretizedSignal,
    sy: &OrbitSamples,
) -> Result<f64> {
    x.same_grid(y)?;
    if sx.shifts.len() != spec.mc_budget || sy.shifts.len() != spec.mc_budget {
        return Err(Error::InvalidConfig(format!(
            "orbit samples carry {} and {} shifts, spec expects {}",
            sx.shifts.len(),
            sy.shifts.len(),
            spec.mc_budget
        )));
    }
    let mode = spec.action.shift_mode();
    let xs = shifted_set(x, sx, mode);
    let ys = shifted_set(y, sy, mode);
    Ok(averaged_entry(&spec.base, x.grid().step(), &xs, &ys))
}

/// Mod-p rotation of the sample vector: entry `k` of the result is
/// `x[(k - r) mod p]`.
pub fn cyclic_rotate(x: &DiscretizedSignal, r: usize) -> DiscretizedSignal {
    let p = x.values().len();
    let r = r % p;
    let values: Vec<f64> = (0..p).map(|k| x.values()[(k + p - r) % p]).collect();
    DiscretizedSignal::new(x.grid(), values).expect("rotation preserves validity")
}

/// Exact average of the base kernel over the discrete cyclic group of mod-p
/// index rotations: `(1/p²) Σ_r Σ_s k(rot_r x, rot_s y)`. Serves as the
/// shift-free oracle for the Monte Carlo approximation.
pub fn exact_cyclic_average(
    base: &GaussianKernel,
    x: &DiscretizedSignal,
    y: &DiscretizedSignal,
) -> Result<f64> {
    x.same_grid(y)?;
    let p = x.values().len();
    let mut acc = 0.0;
    for r in 0..p {
        let xr = cyclic_rotate(x, r);
        for s in 0..p {
            let ys = cyclic_rotate(y, s);
            acc += base.eval(&xr, &ys)?;
        }
    }
    Ok(acc / (p * p) as f64)
}
