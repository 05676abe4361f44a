//! Synthetic-signal generators and the rejection-rate experiment runner.
//!
//! Periodic setting: signals `γ·h(t - θ)·ε` on `[0, 2π]` with circular-shift
//! invariance; aperiodic setting: the same construction on `[-5, 5]` with
//! real-line shifts and Gaussian-window weighting. Under H0 the two samples
//! differ only through their phase distributions, so they coincide modulo
//! shifts; under H1 the shape `h₂` itself differs.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::align_then_test;
use crate::error::{Error, Result};
use crate::group::{build_orbit_samples, AveragedKernelSpec, GroupAction, WeightConfig};
use crate::kernel::{median_heuristic, GaussianKernel};
use crate::mmd::{build_gram, permutation_test, KernelSpec};
use crate::seeding;
use crate::signal::{DiscretizedSignal, Grid, ShiftMode};

const THETA_SD: f64 = 0.8;
const NOISE_MEAN: f64 = 1.0;
const NOISE_SD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Periodic,
    Aperiodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    #[serde(rename = "H0", alias = "h0")]
    H0,
    #[serde(rename = "H1", alias = "h1")]
    H1,
}

/// Which of the two samples a draw belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

/// Testing procedure compared in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Base,
    Invariant,
    Aligned,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Base, Method::Invariant, Method::Aligned];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Base => "base",
            Method::Invariant => "invariant",
            Method::Aligned => "aligned",
        }
    }
}

/// Scenario parameters; serde defaults mirror the experimental protocol
/// (n = m = 20, p = 128, 300 repetitions, S = 16, B = 200, α = 0.05).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub setting: Setting,
    pub hypothesis: Hypothesis,
    #[serde(default = "default_delta_grid")]
    pub delta_grid: Vec<f64>,
    #[serde(default = "default_sample_size")]
    pub n: usize,
    #[serde(default = "default_sample_size")]
    pub m: usize,
    #[serde(default = "default_grid_points")]
    pub p: usize,
    #[serde(default = "default_n_rep")]
    pub n_rep: usize,
    #[serde(default = "default_s_budget")]
    pub s_budget: usize,
    #[serde(default = "default_b_perms")]
    pub b_perms: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sigma_gamma")]
    pub sigma_gamma: f64,
}

fn default_delta_grid() -> Vec<f64> {
    vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
}
fn default_sample_size() -> usize {
    20
}
fn default_grid_points() -> usize {
    128
}
fn default_n_rep() -> usize {
    300
}
fn default_s_budget() -> usize {
    16
}
fn default_b_perms() -> usize {
    200
}
fn default_alpha() -> f64 {
    0.05
}
fn default_sigma_gamma() -> f64 {
    0.2
}

impl ScenarioConfig {
    pub fn new(setting: Setting, hypothesis: Hypothesis) -> Self {
        Self {
            setting,
            hypothesis,
            delta_grid: default_delta_grid(),
            n: default_sample_size(),
            m: default_sample_size(),
            p: default_grid_points(),
            n_rep: default_n_rep(),
            s_budget: default_s_budget(),
            b_perms: default_b_perms(),
            alpha: default_alpha(),
            seed: 0,
            sigma_gamma: default_sigma_gamma(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < 2 {
            return Err(Error::SampleTooSmall {
                n: self.n,
                m: self.m,
            });
        }
        if self.p < 2 {
            return Err(Error::InvalidConfig("p must be at least 2".to_string()));
        }
        if self.n_rep == 0 || self.s_budget == 0 || self.b_perms == 0 {
            return Err(Error::InvalidConfig(
                "n_rep, s_budget and b_perms must be positive".to_string(),
            ));
        }
        if !(0.0 < self.alpha && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.delta_grid.is_empty() {
            return Err(Error::InvalidConfig("delta grid is empty".to_string()));
        }
        if self.delta_grid.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidConfig(
                "delta values must be finite and nonnegative".to_string(),
            ));
        }
        if !self.sigma_gamma.is_finite() || self.sigma_gamma < 0.0 {
            return Err(Error::InvalidConfig(
                "sigma_gamma must be finite and nonnegative".to_string(),
            ));
        }
        Ok(())
    }
}

/// One rejection-rate cell of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub delta: f64,
    pub method: Method,
    pub reject_rate: f64,
    /// Binomial Monte Carlo standard error `sqrt(r(1-r)/N_rep)`.
    pub mc_se: f64,
    /// Summed wall-clock seconds over repetitions.
    pub seconds: f64,
}

/// Rejection-rate table over the delta grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub cells: Vec<CellResult>,
}

impl ExperimentResult {
    pub fn rate(&self, delta: f64, method: Method) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.delta == delta && c.method == method)
            .map(|c| c.reject_rate)
    }
}

pub fn periodic_grid(p: usize) -> Grid {
    Grid::new(0.0, std::f64::consts::TAU, p).expect("valid periodic grid")
}

pub fn aperiodic_grid(p: usize) -> Grid {
    Grid::new(-5.0, 5.0, p).expect("valid aperiodic grid")
}

fn h1_periodic(t: f64) -> f64 {
    t.sin()
}

fn h2_periodic(t: f64, delta: f64) -> f64 {
    t.sin() + delta * (2.0 * t + 0.3).sin()
}

fn h1_aperiodic(t: f64) -> f64 {
    (-2.0 * t * t).exp()
}

/// Two-bump perturbation added to the aperiodic shape under H1.
fn two_bump(t: f64) -> f64 {
    (-2.0 * (t - 1.0) * (t - 1.0)).exp() + 0.4 * (-(t + 1.0) * (t + 1.0) / 2.0).exp()
}

fn h2_aperiodic(t: f64, delta: f64) -> f64 {
    h1_aperiodic(t) + delta / 4.0 * two_bump(t)
}

/// Phase mean for the given scenario cell: under H0 the two samples sit at
/// `±δ/2`, under H1 both at 0 (the shape carries the difference).
fn theta_mean(hypothesis: Hypothesis, delta: f64, side: Side) -> f64 {
    match (hypothesis, side) {
        (Hypothesis::H0, Side::X) => delta / 2.0,
        (Hypothesis::H0, Side::Y) => -delta / 2.0,
        (Hypothesis::H1, _) => 0.0,
    }
}

/// Deterministic core of the generators: `γ·h(t_k - θ)·ε_k` on `grid`.
fn synth_signal(
    grid: Grid,
    h: impl Fn(f64) -> f64,
    gamma: f64,
    theta: f64,
    noise: &[f64],
) -> Result<DiscretizedSignal> {
    let values = grid
        .points()
        .zip(noise)
        .map(|(t, eps)| gamma * h(t - theta) * eps)
        .collect();
    DiscretizedSignal::new(grid, values)
}

fn draw_signal(
    grid: Grid,
    h: impl Fn(f64) -> f64,
    theta_mean: f64,
    wrap: bool,
    sigma_gamma: f64,
    rng: &mut impl Rng,
) -> Result<DiscretizedSignal> {
    let gamma = LogNormal::new(0.0, sigma_gamma)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?
        .sample(rng);
    let mut theta = Normal::new(theta_mean, THETA_SD)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?
        .sample(rng);
    if wrap {
        theta = theta.rem_euclid(std::f64::consts::TAU);
    }
    let noise_dist =
        Normal::new(NOISE_MEAN, NOISE_SD).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let noise: Vec<f64> = (0..grid.n_points()).map(|_| noise_dist.sample(rng)).collect();
    synth_signal(grid, h, gamma, theta, &noise)
}

/// Sample of `n` periodic signals on `[0, 2π]` for one side of the scenario.
pub fn gen_periodic(
    hypothesis: Hypothesis,
    delta: f64,
    side: Side,
    n: usize,
    p: usize,
    sigma_gamma: f64,
    rng: &mut impl Rng,
) -> Result<Vec<DiscretizedSignal>> {
    let grid = periodic_grid(p);
    let mean = theta_mean(hypothesis, delta, side);
    (0..n)
        .map(|_| match (hypothesis, side) {
            (Hypothesis::H1, Side::Y) => {
                draw_signal(grid, |t| h2_periodic(t, delta), mean, true, sigma_gamma, rng)
            }
            _ => draw_signal(grid, h1_periodic, mean, true, sigma_gamma, rng),
        })
        .collect()
}

/// Sample of `n` aperiodic signals on `[-5, 5]` for one side of the scenario.
pub fn gen_aperiodic(
    hypothesis: Hypothesis,
    delta: f64,
    side: Side,
    n: usize,
    p: usize,
    sigma_gamma: f64,
    rng: &mut impl Rng,
) -> Result<Vec<DiscretizedSignal>> {
    let grid = aperiodic_grid(p);
    let mean = theta_mean(hypothesis, delta, side);
    (0..n)
        .map(|_| match (hypothesis, side) {
            (Hypothesis::H1, Side::Y) => {
                draw_signal(grid, |t| h2_aperiodic(t, delta), mean, false, sigma_gamma, rng)
            }
            _ => draw_signal(grid, h1_aperiodic, mean, false, sigma_gamma, rng),
        })
        .collect()
}

/// Gaussian-window width from the pooled sample: the median of the positive
/// energy-dispersion values `s(x)`, where `μ(x)` and `s(x)²` are the energy
/// barycenter and spread of `x` over the grid.
pub fn select_c(pool: &[DiscretizedSignal]) -> Result<f64> {
    let mut spreads = Vec::new();
    for x in pool {
        let energy: f64 = x.values().iter().map(|v| v * v).sum();
        if energy <= 0.0 {
            continue;
        }
        let mu: f64 = x
            .grid()
            .points()
            .zip(x.values())
            .map(|(t, v)| t * v * v)
            .sum::<f64>()
            / energy;
        let var: f64 = x
            .grid()
            .points()
            .zip(x.values())
            .map(|(t, v)| (t - mu) * (t - mu) * v * v)
            .sum::<f64>()
            / energy;
        let s = var.sqrt();
        if s > 0.0 {
            spreads.push(s);
        }
    }
    if spreads.is_empty() {
        return Err(Error::AllDegenerate);
    }
    spreads.sort_by(f64::total_cmp);
    let n = spreads.len();
    Ok(if n % 2 == 1 {
        spreads[n / 2]
    } else {
        0.5 * (spreads[n / 2 - 1] + spreads[n / 2])
    })
}

struct RepOutcome {
    rejects: [bool; 3],
    seconds: [f64; 3],
}

fn run_repetition(
    cfg: &ScenarioConfig,
    delta_idx: usize,
    delta: f64,
    rep: usize,
) -> Result<RepOutcome> {
    let di = delta_idx as u64;
    let r = rep as u64;
    let mut rng_x = seeding::derive_rng(cfg.seed, &[seeding::STREAM_DATA, di, r, 0]);
    let mut rng_y = seeding::derive_rng(cfg.seed, &[seeding::STREAM_DATA, di, r, 1]);

    let (x, y) = match cfg.setting {
        Setting::Periodic => (
            gen_periodic(cfg.hypothesis, delta, Side::X, cfg.n, cfg.p, cfg.sigma_gamma, &mut rng_x)?,
            gen_periodic(cfg.hypothesis, delta, Side::Y, cfg.m, cfg.p, cfg.sigma_gamma, &mut rng_y)?,
        ),
        Setting::Aperiodic => (
            gen_aperiodic(cfg.hypothesis, delta, Side::X, cfg.n, cfg.p, cfg.sigma_gamma, &mut rng_x)?,
            gen_aperiodic(cfg.hypothesis, delta, Side::Y, cfg.m, cfg.p, cfg.sigma_gamma, &mut rng_y)?,
        ),
    };
    let mut pool = x.clone();
    pool.extend(y.iter().cloned());

    // One bandwidth per repetition, from the raw pooled sample, shared by
    // all three procedures.
    let sigma = median_heuristic(&pool)?;
    let kernel = GaussianKernel::new(sigma)?;

    let mut rejects = [false; 3];
    let mut seconds = [0.0; 3];

    let t0 = Instant::now();
    let gram = build_gram(&pool, cfg.n, &KernelSpec::Base(kernel), None)?;
    let perm_seed = seeding::derive_seed(cfg.seed, &[seeding::STREAM_PERM, di, r, 0]);
    let report = permutation_test(&gram, cfg.b_perms, cfg.alpha, perm_seed)?;
    rejects[0] = report.reject;
    seconds[0] = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let (action, weight) = match cfg.setting {
        Setting::Periodic => (
            GroupAction::CircularShift {
                period: periodic_grid(cfg.p).span(),
            },
            WeightConfig::Unit,
        ),
        Setting::Aperiodic => (
            GroupAction::RealLineShift,
            WeightConfig::GaussianWindow {
                c: select_c(&pool)?,
            },
        ),
    };
    let shift_seed = seeding::derive_seed(cfg.seed, &[seeding::STREAM_SHIFTS, di, r]);
    let spec = AveragedKernelSpec::new(kernel, action, weight, cfg.s_budget, shift_seed)?;
    let orbit = build_orbit_samples(&pool, &spec)?;
    let gram = build_gram(&pool, cfg.n, &KernelSpec::Averaged(spec), Some(&orbit))?;
    let perm_seed = seeding::derive_seed(cfg.seed, &[seeding::STREAM_PERM, di, r, 1]);
    let report = permutation_test(&gram, cfg.b_perms, cfg.alpha, perm_seed)?;
    rejects[1] = report.reject;
    seconds[1] = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let mode = match cfg.setting {
        Setting::Periodic => ShiftMode::PeriodicWrap,
        Setting::Aperiodic => ShiftMode::ZeroPad,
    };
    let perm_seed = seeding::derive_seed(cfg.seed, &[seeding::STREAM_PERM, di, r, 2]);
    let report = align_then_test(&x, &y, &kernel, mode, cfg.b_perms, cfg.alpha, perm_seed)?;
    rejects[2] = report.reject;
    seconds[2] = t2.elapsed().as_secs_f64();

    Ok(RepOutcome { rejects, seconds })
}

/// Run the full rejection-rate experiment. Repetitions are independent tasks
/// with derived seeds; a failed repetition aborts the run.
pub fn run_experiment(cfg: &ScenarioConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut cells = Vec::with_capacity(cfg.delta_grid.len() * Method::ALL.len());
    for (delta_idx, &delta) in cfg.delta_grid.iter().enumerate() {
        let outcomes: Vec<RepOutcome> = (0..cfg.n_rep)
            .into_par_iter()
            .map(|rep| run_repetition(cfg, delta_idx, delta, rep))
            .collect::<Result<_>>()?;
        for (mi, method) in Method::ALL.iter().enumerate() {
            let rejections = outcomes.iter().filter(|o| o.rejects[mi]).count();
            let rate = rejections as f64 / cfg.n_rep as f64;
            let mc_se = (rate * (1.0 - rate) / cfg.n_rep as f64).sqrt();
            let seconds = outcomes.iter().map(|o| o.seconds[mi]).sum();
            cells.push(CellResult {
                delta,
                method: *method,
                reject_rate: rate,
                mc_se,
                seconds,
            });
        }
    }
    Ok(ExperimentResult { cells })
}

/// Write the rejection-rate table as CSV rows
/// `delta,method,reject_rate,mc_se,seconds`. With `include_timing` false the
/// seconds column is written as zero so reruns with the same seed are
/// byte-identical.
pub fn write_experiment_csv<W: Write>(
    w: &mut W,
    result: &ExperimentResult,
    include_timing: bool,
) -> std::io::Result<()> {
    writeln!(w, "delta,method,reject_rate,mc_se,seconds")?;
    for cell in &result.cells {
        let seconds = if include_timing { cell.seconds } else { 0.0 };
        writeln!(
            w,
            "{},{},{:.6},{:.6},{:.3}",
            cell.delta,
            cell.method.name(),
            cell.reject_rate,
            cell.mc_se,
            seconds
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_limit_periodic_h1() {
        // No noise, unit amplitude, zero phase: the H1 shape is exact.
        let grid = periodic_grid(64);
        let noise = vec![1.0; 64];
        let x = synth_signal(grid, |t| h2_periodic(t, 1.0), 1.0, 0.0, &noise).unwrap();
        for (t, v) in grid.points().zip(x.values()) {
            assert!((v - (t.sin() + (2.0 * t + 0.3).sin())).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_limit_aperiodic_h1_at_one() {
        let expected = (-2.0_f64).exp() + 0.25 + 0.1 * (-2.0_f64).exp();
        assert!((h2_aperiodic(1.0, 1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn h2_minus_h1_recovers_two_bump() {
        for delta in [0.2, 0.6, 1.0] {
            for k in 0..50 {
                let t = -5.0 + 10.0 * k as f64 / 49.0;
                let diff = (h2_aperiodic(t, delta) - h1_aperiodic(t)) * 4.0 / delta;
                assert!((diff - two_bump(t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn theta_draw_moments() {
        // Pre-wrapping phase draws have mean δ/2 and sd 0.8.
        let delta = 0.6;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let dist = Normal::new(theta_mean(Hypothesis::H0, delta, Side::X), THETA_SD).unwrap();
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let sd = (draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n as f64).sqrt();
        assert!((mean - delta / 2.0).abs() < 0.01);
        assert!((sd - THETA_SD).abs() < 0.01);
    }

    #[test]
    fn h0_sides_share_the_generator_at_delta_zero() {
        // At δ = 0 the two sides have identical θ distributions; with the
        // same RNG stream they produce identical draws.
        let mut rng_a = ChaCha8Rng::seed_from_u64(11);
        let mut rng_b = ChaCha8Rng::seed_from_u64(11);
        let xs = gen_periodic(Hypothesis::H0, 0.0, Side::X, 4, 16, 0.2, &mut rng_a).unwrap();
        let ys = gen_periodic(Hypothesis::H0, 0.0, Side::Y, 4, 16, 0.2, &mut rng_b).unwrap();
        assert_eq!(xs, ys);
        let mut rng_a = ChaCha8Rng::seed_from_u64(11);
        let mut rng_b = ChaCha8Rng::seed_from_u64(11);
        let xs = gen_aperiodic(Hypothesis::H0, 0.0, Side::X, 4, 16, 0.2, &mut rng_a).unwrap();
        let ys = gen_aperiodic(Hypothesis::H0, 0.0, Side::Y, 4, 16, 0.2, &mut rng_b).unwrap();
        assert_eq!(xs, ys);
    }

    #[test]
    fn select_c_excludes_spikes() {
        // A single spike has zero dispersion and is excluded.
        let grid = Grid::new(-2.5, 2.5, 11).unwrap();
        let mut spike = vec![0.0; 11];
        spike[3] = 2.0;
        let pool = vec![DiscretizedSignal::new(grid, spike).unwrap()];
        assert!(matches!(select_c(&pool), Err(Error::AllDegenerate)));
    }

    #[test]
    fn select_c_symmetric_two_spike() {
        // Equal mass at ±1: barycenter 0 and dispersion 1.
        let grid = Grid::new(-2.5, 2.5, 11).unwrap();
        let mut values = vec![0.0; 11];
        let points: Vec<f64> = grid.points().collect();
        let at = |x: f64| points.iter().position(|t| (t - x).abs() < 1e-12).unwrap();
        values[at(-1.0)] = 1.5;
        values[at(1.0)] = 1.5;
        let pool = vec![DiscretizedSignal::new(grid, values).unwrap()];
        assert!((select_c(&pool).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn select_c_median_convention() {
        // Dispersions {0, 0.5, 1.5, 2.5}: the zero is dropped, median 1.5.
        let grid = Grid::new(-2.5, 2.5, 11).unwrap();
        let points: Vec<f64> = grid.points().collect();
        let at = |x: f64| points.iter().position(|t| (t - x).abs() < 1e-12).unwrap();
        let two_spike = |s: f64| {
            let mut values = vec![0.0; 11];
            values[at(-s)] = 1.0;
            values[at(s)] = 1.0;
            DiscretizedSignal::new(grid, values).unwrap()
        };
        let mut spike = vec![0.0; 11];
        spike[at(0.0)] = 1.0;
        let pool = vec![
            DiscretizedSignal::new(grid, spike).unwrap(),
            two_spike(0.5),
            two_spike(1.5),
            two_spike(2.5),
        ];
        assert!((select_c(&pool).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn experiment_is_deterministic() {
        let mut cfg = ScenarioConfig::new(Setting::Periodic, Hypothesis::H0);
        cfg.delta_grid = vec![0.0, 1.0];
        cfg.n = 6;
        cfg.m = 6;
        cfg.p = 24;
        cfg.n_rep = 5;
        cfg.s_budget = 4;
        cfg.b_perms = 20;
        cfg.seed = 99;
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        let strip = |r: &ExperimentResult| {
            r.cells
                .iter()
                .map(|c| (c.delta, c.method, c.reject_rate, c.mc_se))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));

        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        write_experiment_csv(&mut buf_a, &a, false).unwrap();
        write_experiment_csv(&mut buf_b, &b, false).unwrap();
        assert_eq!(buf_a, buf_b);
        assert_eq!(a.cells.len(), 6);
    }

    #[test]
    fn config_json_round_trip_with_defaults() {
        let json = r#"{"setting": "aperiodic", "hypothesis": "H1", "seed": 7}"#;
        let cfg: ScenarioConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.setting, Setting::Aperiodic);
        assert_eq!(cfg.hypothesis, Hypothesis::H1);
        assert_eq!(cfg.n, 20);
        assert_eq!(cfg.p, 128);
        assert_eq!(cfg.n_rep, 300);
        assert_eq!(cfg.s_budget, 16);
        assert_eq!(cfg.b_perms, 200);
        assert_eq!(cfg.alpha, 0.05);
        assert_eq!(cfg.sigma_gamma, 0.2);
        assert_eq!(cfg.delta_grid, vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        let back = serde_json::to_string(&cfg).unwrap();
        let cfg2: ScenarioConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(cfg2.seed, 7);
    }
}
