//! Group-invariant kernel two-sample testing for functional data.
//!
//! This crate implements MMD two-sample tests that compare distributions of
//! discretized signals *up to a group of time shifts*. The invariant kernel is
//! obtained by averaging a base Gaussian kernel over shift actions: uniformly
//! over the circle for periodic signals, and with a Gaussian-window weighting
//! over the real line for aperiodic signals, where the plain Haar average
//! would diverge. The averaged kernel is approximated by Monte Carlo sampling
//! of per-signal shift distributions, so the pooled Gram matrix stays an exact
//! inner-product matrix and permutation calibration remains valid.
//!
//! Module map:
//! - [`signal`]: uniform-grid signals, L² geometry, wrap/zero-pad shifts.
//! - [`kernel`]: Gaussian base kernel and the median-heuristic bandwidth.
//! - [`group`]: weighting function, orbit weights, shift sampling, averaged
//!   kernel and an exact cyclic-group oracle.
//! - [`mmd`]: unbiased MMD² U-statistic, pooled Gram matrices, permutation
//!   test.
//! - [`align`]: align-then-test baseline (medoid reference, shift + scale).
//! - [`sim`]: synthetic-data generators and the rejection-rate experiment
//!   runner.
//! - [`pcg`]: phonocardiogram preprocessing, cycle extraction and the
//!   real-data experiments.

pub mod align;
pub mod error;
pub mod group;
pub mod kernel;
pub mod mmd;
pub mod pcg;
mod seeding;
pub mod signal;
pub mod sim;

pub use error::{Error, Result};
pub use group::{AveragedKernelSpec, GroupAction, OrbitSamples, WeightConfig};
pub use kernel::GaussianKernel;
pub use mmd::{GramMatrix, KernelSpec, TestReport};
pub use signal::{DiscretizedSignal, Grid, ShiftMode};
pub use sim::{ExperimentResult, Method, ScenarioConfig};
