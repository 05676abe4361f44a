//! Error type shared by all modules.

use thiserror::Error;

use crate::signal::Grid;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Two signals that must share a grid do not.
    #[error("grid mismatch: [{}, {}] with {} points vs [{}, {}] with {} points",
        .0.a(), .0.b(), .0.n_points(), .1.a(), .1.b(), .1.n_points())]
    GridMismatch(Grid, Grid),

    /// Standardization of a constant signal.
    #[error("cannot standardize a constant signal")]
    ZeroVariance,

    /// Median heuristic over a pool whose pairwise distances are all zero.
    #[error("degenerate pool: median pairwise distance is zero")]
    DegeneratePool,

    /// Shift sampling for a signal with no energy.
    #[error("degenerate signal: zero energy, shift distribution undefined")]
    DegenerateSignal,

    /// U-statistic needs at least two observations on each side.
    #[error("sample too small: n={n}, m={m} (need at least 2 each)")]
    SampleTooSmall { n: usize, m: usize },

    /// No pool signal has positive energy dispersion.
    #[error("all signals degenerate: no positive energy dispersion")]
    AllDegenerate,

    /// Band-pass edges outside (0, Nyquist) or out of order.
    #[error("invalid band [{low}, {high}] Hz at sample rate {rate} Hz")]
    BandInvalid { low: f64, high: f64, rate: f64 },

    /// Recording too short for the requested analysis.
    #[error("recording too short: {got} samples, need at least {need}")]
    TooShort { need: usize, got: usize },

    /// No position where a full segment fits inside the recording.
    #[error("no valid start for a segment of {0} s")]
    NoValidStart(f64),

    /// Fewer recordings than the experiment requires.
    #[error("not enough recordings: need {need}, have {have}")]
    InsufficientData { need: usize, have: usize },

    /// Empty input where at least one element is required.
    #[error("empty input")]
    EmptyInput,

    /// Invalid parameter combination.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Malformed file contents (CSV, WAV, ...).
    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
