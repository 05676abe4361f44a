//! Phonocardiogram preprocessing, cycle extraction and real-data
//! experiments.
//!
//! Recordings are resampled to 1 kHz, band-pass filtered with a zero-phase
//! spectral mask, and summarized by a sliding-RMS energy envelope. The
//! cardiac period is the autocorrelation-maximizing lag within a plausible
//! heart-rate range. One cycle per recording is extracted either anchored at
//! the strongest envelope peak (S1-aligned) or at a uniformly drawn start,
//! resampled to a fixed length and standardized; the resulting vectors feed
//! the same three tests as the synthetic experiments, with circular-shift
//! invariance.

pub mod wav;

use rand::Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::io::Write;

use crate::align::align_then_test;
use crate::error::{Error, Result};
use crate::group::{build_orbit_samples, AveragedKernelSpec, GroupAction, WeightConfig};
use crate::kernel::{median_heuristic, GaussianKernel};
use crate::mmd::{build_gram, permutation_test, KernelSpec};
use crate::seeding;
use crate::signal::{DiscretizedSignal, Grid, ShiftMode};
use crate::sim::Method;

/// A single-channel recording.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
    pub source_id: String,
}

impl Recording {
    pub fn new(samples: Vec<f64>, sample_rate: f64, source_id: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !sample_rate.is_finite() || sample_rate <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
            source_id: source_id.into(),
        })
    }

    pub fn duration(&self) -> f64 {
        (self.samples.len() - 1) as f64 / self.sample_rate
    }
}

/// Cycle extraction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionMode {
    S1Aligned,
    RandomStart,
}

/// Preprocessing and extraction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionConfig {
    pub mode: ExtractionMode,
    /// Number of points per extracted cycle.
    pub target_len: usize,
    pub band_low_hz: f64,
    pub band_high_hz: f64,
    pub rms_window_s: f64,
    pub bpm_min: f64,
    pub bpm_max: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            mode: ExtractionMode::S1Aligned,
            target_len: 128,
            band_low_hz: 25.0,
            band_high_hz: 400.0,
            rms_window_s: 0.05,
            bpm_min: 40.0,
            bpm_max: 180.0,
        }
    }
}

/// Resample onto a 1 kHz grid spanning the original duration, by linear
/// interpolation. A recording already at 1 kHz is returned unchanged.
pub fn resample_1khz(rec: &Recording) -> Recording {
    const TARGET: f64 = 1000.0;
    if rec.sample_rate == TARGET {
        return rec.clone();
    }
    let out_len = (rec.duration() * TARGET).floor() as usize + 1;
    let scale = rec.sample_rate / TARGET;
    let n = rec.samples.len();
    let samples: Vec<f64> = (0..out_len)
        .map(|i| {
            let s = i as f64 * scale;
            let k = s.floor() as usize;
            if k + 1 >= n {
                rec.samples[n - 1]
            } else {
                let frac = s - k as f64;
                rec.samples[k] * (1.0 - frac) + rec.samples[k + 1] * frac
            }
        })
        .collect();
    Recording {
        samples,
        sample_rate: TARGET,
        source_id: rec.source_id.clone(),
    }
}

/// Zero-phase band-pass: forward FFT, zero every bin with |frequency|
/// outside `[low, high]`, inverse FFT.
pub fn bandpass(rec: &Recording, low: f64, high: f64) -> Result<Recording> {
    let nyquist = rec.sample_rate / 2.0;
    if !(0.0 < low && low < high && high < nyquist) {
        return Err(Error::BandInvalid {
            low,
            high,
            rate: rec.sample_rate,
        });
    }
    let n = rec.samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex<f64>> = rec
        .samples
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .collect();
    forward.process(&mut buf);
    let df = rec.sample_rate / n as f64;
    for (k, value) in buf.iter_mut().enumerate() {
        let freq = if k <= n / 2 {
            k as f64 * df
        } else {
            (n - k) as f64 * df
        };
        if freq < low || freq > high {
            *value = Complex::new(0.0, 0.0);
        }
    }
    inverse.process(&mut buf);
    let samples = buf.iter().map(|c| c.re / n as f64).collect();
    Ok(Recording {
        samples,
        sample_rate: rec.sample_rate,
        source_id: rec.source_id.clone(),
    })
}

/// Sliding RMS envelope with a centered window of `window_s` seconds;
/// windows are truncated at the edges.
pub fn rms_envelope(rec: &Recording, window_s: f64) -> Recording {
    let n = rec.samples.len();
    let w = ((window_s * rec.sample_rate).round() as usize).max(1);
    let half_lo = (w - 1) / 2;
    let half_hi = w / 2;
    // Prefix sums of squares for O(1) window means.
    let mut prefix = vec![0.0; n + 1];
    for (i, &v) in rec.samples.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v * v;
    }
    let samples: Vec<f64> = (0..n)
        .map(|k| {
            let lo = k.saturating_sub(half_lo);
            let hi = (k + half_hi).min(n - 1);
            let count = (hi - lo + 1) as f64;
            ((prefix[hi + 1] - prefix[lo]) / count).sqrt()
        })
        .collect();
    Recording {
        samples,
        sample_rate: rec.sample_rate,
        source_id: rec.source_id.clone(),
    }
}

/// Estimated cardiac period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodEstimate {
    pub period_s: f64,
    /// Autocorrelation at the selected lag, normalized by lag zero.
    pub peak_corr: f64,
    /// Set when `peak_corr < 0.2`.
    pub low_confidence: bool,
}

/// Lag maximizing the autocorrelation of the mean-removed envelope within
/// the heart-rate range `[bpm_min, bpm_max]`; ties break to the smallest
/// lag. The envelope must cover the largest candidate lag twice.
pub fn estimate_period(env: &Recording, bpm_min: f64, bpm_max: f64) -> Result<PeriodEstimate> {
    if !(0.0 < bpm_min && bpm_min < bpm_max) {
        return Err(Error::InvalidConfig(format!(
            "bpm range [{bpm_min}, {bpm_max}] must be increasing and positive"
        )));
    }
    let rate = env.sample_rate;
    let min_lag = ((rate * 60.0 / bpm_max).ceil() as usize).max(1);
    let max_lag = (rate * 60.0 / bpm_min).floor() as usize;
    let n = env.samples.len();
    if n < 2 * max_lag {
        return Err(Error::TooShort {
            need: 2 * max_lag,
            got: n,
        });
    }
    let mean = env.samples.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = env.samples.iter().map(|v| v - mean).collect();
    let r0: f64 = centered.iter().map(|v| v * v).sum();
    let mut best_lag = min_lag;
    let mut best = f64::NEG_INFINITY;
    for lag in min_lag..=max_lag {
        let mut acc = 0.0;
        for i in 0..(n - lag) {
            acc += centered[i] * centered[i + lag];
        }
        if acc > best {
            best = acc;
            best_lag = lag;
        }
    }
    let peak_corr = if r0 > 0.0 { best / r0 } else { 0.0 };
    Ok(PeriodEstimate {
        period_s: best_lag as f64 / rate,
        peak_corr,
        low_confidence: peak_corr < 0.2,
    })
}

fn sample_recording(rec: &Recording, s: f64) -> f64 {
    let n = rec.samples.len();
    let k = s.floor() as usize;
    if k + 1 >= n {
        return rec.samples[n - 1];
    }
    let frac = s - k as f64;
    rec.samples[k] * (1.0 - frac) + rec.samples[k + 1] * frac
}

/// Extract one cycle of length `period_s` from the recording, resampled to
/// `cfg.target_len` points on `[0, 1]` and standardized.
///
/// S1-aligned: the segment starts at the highest envelope value with a full
/// period remaining. Random-start: the start is drawn uniformly over all
/// sample positions where the segment fits.
pub fn extract_cycle(
    rec: &Recording,
    env: &Recording,
    period_s: f64,
    cfg: &ExtractionConfig,
    rng: &mut impl Rng,
) -> Result<DiscretizedSignal> {
    let rate = rec.sample_rate;
    let n = rec.samples.len();
    let seg = period_s * rate;
    let max_start_f = (n - 1) as f64 - seg;
    if max_start_f < 0.0 {
        return Err(Error::NoValidStart(period_s));
    }
    let max_start = (max_start_f.floor() as usize).min(n - 1);
    let start = match cfg.mode {
        ExtractionMode::S1Aligned => {
            let window = &env.samples[..(max_start + 1).min(env.samples.len())];
            if window.is_empty() {
                return Err(Error::NoValidStart(period_s));
            }
            let mut best = 0;
            for (i, &v) in window.iter().enumerate() {
                if v > window[best] {
                    best = i;
                }
            }
            best
        }
        ExtractionMode::RandomStart => rng.random_range(0..=max_start),
    };
    let p = cfg.target_len;
    let grid = Grid::new(0.0, 1.0, p)?;
    let values: Vec<f64> = (0..p)
        .map(|i| sample_recording(rec, start as f64 + i as f64 * seg / (p - 1) as f64))
        .collect();
    DiscretizedSignal::new(grid, values)?.standardize()
}

/// A recording with its preprocessing products cached.
#[derive(Debug, Clone)]
pub struct PreparedRecording {
    pub cfg: ExtractionConfig,
    pub filtered: Recording,
    pub envelope: Recording,
    pub period: PeriodEstimate,
    /// Deterministic S1-aligned cycle.
    pub s1_cycle: DiscretizedSignal,
}

/// Resample, filter, envelope, estimate the period and cache the S1-aligned
/// cycle of one recording.
pub fn prepare(rec: &Recording, cfg: &ExtractionConfig) -> Result<PreparedRecording> {
    let resampled = resample_1khz(rec);
    let filtered = bandpass(&resampled, cfg.band_low_hz, cfg.band_high_hz)?;
    let envelope = rms_envelope(&filtered, cfg.rms_window_s);
    let period = estimate_period(&envelope, cfg.bpm_min, cfg.bpm_max)?;
    let mut s1_cfg = *cfg;
    s1_cfg.mode = ExtractionMode::S1Aligned;
    // The S1 extraction is deterministic; the RNG is never touched.
    let mut unused = seeding::derive_rng(0, &[]);
    let s1_cycle = extract_cycle(&filtered, &envelope, period.period_s, &s1_cfg, &mut unused)?;
    Ok(PreparedRecording {
        cfg: *cfg,
        filtered,
        envelope,
        period,
        s1_cycle,
    })
}

/// Test-budget parameters for the real-data experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgTestParams {
    pub s_budget: usize,
    pub b_perms: usize,
    pub alpha: f64,
    pub n_rep: usize,
    pub seed: u64,
}

impl Default for PcgTestParams {
    fn default() -> Self {
        Self {
            s_budget: 16,
            b_perms: 200,
            alpha: 0.05,
            n_rep: 300,
            seed: 0,
        }
    }
}

/// Rejection rate of one method over the repetitions of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRates {
    pub method: Method,
    pub reject_rate: f64,
    pub mc_se: f64,
}

fn run_three_tests(
    x: &[DiscretizedSignal],
    y: &[DiscretizedSignal],
    params: &PcgTestParams,
    rep: u64,
) -> Result<[bool; 3]> {
    let mut pool = x.to_vec();
    pool.extend(y.iter().cloned());
    let sigma = median_heuristic(&pool)?;
    let kernel = GaussianKernel::new(sigma)?;
    let grid = pool[0].grid();

    let gram = build_gram(&pool, x.len(), &KernelSpec::Base(kernel), None)?;
    let base = permutation_test(
        &gram,
        params.b_perms,
        params.alpha,
        seeding::derive_seed(params.seed, &[seeding::STREAM_PERM, rep, 0]),
    )?;

    let spec = AveragedKernelSpec::new(
        kernel,
        GroupAction::CircularShift { period: grid.span() },
        WeightConfig::Unit,
        params.s_budget,
        seeding::derive_seed(params.seed, &[seeding::STREAM_SHIFTS, rep]),
    )?;
    let orbit = build_orbit_samples(&pool, &spec)?;
    let gram = build_gram(&pool, x.len(), &KernelSpec::Averaged(spec), Some(&orbit))?;
    let invariant = permutation_test(
        &gram,
        params.b_perms,
        params.alpha,
        seeding::derive_seed(params.seed, &[seeding::STREAM_PERM, rep, 1]),
    )?;

    let aligned = align_then_test(
        x,
        y,
        &kernel,
        ShiftMode::PeriodicWrap,
        params.b_perms,
        params.alpha,
        seeding::derive_seed(params.seed, &[seeding::STREAM_PERM, rep, 2]),
    )?;

    Ok([base.reject, invariant.reject, aligned.reject])
}

fn aggregate(rejects: &[[bool; 3]], n_rep: usize) -> Vec<MethodRates> {
    Method::ALL
        .iter()
        .enumerate()
        .map(|(mi, method)| {
            let count = rejects.iter().filter(|r| r[mi]).count();
            let rate = count as f64 / n_rep as f64;
            MethodRates {
                method: *method,
                reject_rate: rate,
                mc_se: (rate * (1.0 - rate) / n_rep as f64).sqrt(),
            }
        })
        .collect()
}

/// Phase-mismatch experiment: per repetition, draw `2n` distinct recordings,
/// extract sample X with the S1-aligned strategy and sample Y with the
/// random-start strategy, and run the three tests.
pub fn misalignment_experiment(
    pool: &[PreparedRecording],
    n: usize,
    params: &PcgTestParams,
) -> Result<Vec<MethodRates>> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, m: n });
    }
    if pool.len() < 2 * n {
        return Err(Error::InsufficientData {
            need: 2 * n,
            have: pool.len(),
        });
    }
    let rejects: Vec<[bool; 3]> = (0..params.n_rep)
        .into_par_iter()
        .map(|rep| {
            let rep = rep as u64;
            let mut sel_rng =
                seeding::derive_rng(params.seed, &[seeding::STREAM_PCG_SELECT, rep]);
            let chosen = rand::seq::index::sample(&mut sel_rng, pool.len(), 2 * n);
            let x: Vec<DiscretizedSignal> = (0..n)
                .map(|i| pool[chosen.index(i)].s1_cycle.clone())
                .collect();
            let mut start_rng =
                seeding::derive_rng(params.seed, &[seeding::STREAM_PCG_START, rep]);
            let y: Vec<DiscretizedSignal> = (n..2 * n)
                .map(|i| {
                    let rec = &pool[chosen.index(i)];
                    let cfg = ExtractionConfig {
                        mode: ExtractionMode::RandomStart,
                        ..rec.cfg
                    };
                    extract_cycle(
                        &rec.filtered,
                        &rec.envelope,
                        rec.period.period_s,
                        &cfg,
                        &mut start_rng,
                    )
                })
                .collect::<Result<_>>()?;
            run_three_tests(&x, &y, params, rep)
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(&rejects, params.n_rep))
}

/// Label experiment: per repetition, draw `n` recordings from each label
/// group, extract both samples with the S1-aligned strategy, and run the
/// three tests.
pub fn label_experiment(
    normal: &[PreparedRecording],
    abnormal: &[PreparedRecording],
    n: usize,
    params: &PcgTestParams,
) -> Result<Vec<MethodRates>> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, m: n });
    }
    if normal.len() < n || abnormal.len() < n {
        return Err(Error::InsufficientData {
            need: n,
            have: normal.len().min(abnormal.len()),
        });
    }
    let rejects: Vec<[bool; 3]> = (0..params.n_rep)
        .into_par_iter()
        .map(|rep| {
            let rep = rep as u64;
            let mut sel_rng =
                seeding::derive_rng(params.seed, &[seeding::STREAM_PCG_SELECT, rep, 0]);
            let xi = rand::seq::index::sample(&mut sel_rng, normal.len(), n);
            let mut sel_rng =
                seeding::derive_rng(params.seed, &[seeding::STREAM_PCG_SELECT, rep, 1]);
            let yi = rand::seq::index::sample(&mut sel_rng, abnormal.len(), n);
            let x: Vec<DiscretizedSignal> =
                xi.iter().map(|i| normal[i].s1_cycle.clone()).collect();
            let y: Vec<DiscretizedSignal> =
                yi.iter().map(|i| abnormal[i].s1_cycle.clone()).collect();
            run_three_tests(&x, &y, params, rep)
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(&rejects, params.n_rep))
}

/// Recording label from a PhysioNet-style CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Normal,
    Abnormal,
}

/// Parse a label CSV with rows `record_id,label`, where the label is
/// `normal`/`abnormal` or the numeric aliases `-1`/`1`.
pub fn read_label_csv<R: std::io::BufRead>(r: R) -> Result<Vec<(String, Label)>> {
    let mut out = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.splitn(2, ',');
        let id = parts
            .next()
            .filter(|s| !s.trim().is_empty())
            .ok_or_else(|| Error::Format(format!("line {}: missing record id", lineno + 1)))?
            .trim();
        let label = parts
            .next()
            .ok_or_else(|| Error::Format(format!("line {}: missing label", lineno + 1)))?
            .trim();
        let label = match label.to_ascii_lowercase().as_str() {
            "normal" | "-1" => Label::Normal,
            "abnormal" | "1" => Label::Abnormal,
            other => {
                return Err(Error::Format(format!(
                    "line {}: unknown label `{other}`",
                    lineno + 1
                )))
            }
        };
        out.push((id.to_string(), label));
    }
    Ok(out)
}

/// Write the experiment table as CSV rows `n,method,reject_rate,mc_se`.
pub fn write_pcg_csv<W: Write>(
    w: &mut W,
    rows: &[(usize, Vec<MethodRates>)],
) -> std::io::Result<()> {
    writeln!(w, "n,method,reject_rate,mc_se")?;
    for (n, rates) in rows {
        for r in rates {
            writeln!(
                w,
                "{},{},{:.6},{:.6}",
                n,
                r.method.name(),
                r.reject_rate,
                r.mc_se
            )?;
        }
    }
    Ok(())
}
