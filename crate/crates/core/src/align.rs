//! Align-then-test baseline.
//!
//! Observations are registered to an empirical medoid reference by a
//! grid-searched shift and a closed-form least-squares scale, then the
//! base-kernel MMD permutation test runs on the aligned pool. The reference
//! is the medoid of the *pooled* sample: a per-sample reference would leave
//! each aligned group sitting at its own reference's phase, and the test
//! would reject distributions that differ only by shifts. With one shared
//! reference the aligned pool depends on the pooled multiset alone, so
//! permuting labels after alignment is a valid calibration.

use crate::error::{Error, Result};
use crate::kernel::GaussianKernel;
use crate::mmd::{build_gram, permutation_test, KernelSpec, TestReport};
use crate::signal::{DiscretizedSignal, ShiftMode};

/// One aligned observation: `aligned = scale · shift(x, shift_t)`.
#[derive(Debug, Clone)]
pub struct Alignment {
    pub shift_t: f64,
    pub scale: f64,
    pub aligned: DiscretizedSignal,
}

/// Alignment of a whole sample to its medoid.
#[derive(Debug, Clone)]
pub struct AlignmentResult {
    pub medoid: usize,
    pub entries: Vec<Alignment>,
}

/// Index minimizing the sum of L² distances to all other sample members;
/// ties break to the lowest index.
pub fn medoid(sample: &[DiscretizedSignal]) -> Result<usize> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = sample.len();
    let mut sums = vec![0.0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = sample[i].l2_dist(&sample[j])?;
            sums[i] += d;
            sums[j] += d;
        }
    }
    let mut best = 0;
    for i in 1..n {
        if sums[i] < sums[best] {
            best = i;
        }
    }
    Ok(best)
}

fn candidate_shifts(x: &DiscretizedSignal, mode: ShiftMode) -> Vec<f64> {
    let p = x.grid().n_points();
    let h = x.grid().step();
    match mode {
        // All p grid-multiple shifts of one period.
        ShiftMode::PeriodicWrap => (0..p).map(|j| j as f64 * h).collect(),
        // All integer-step shifts in [-(b-a), b-a], ordered by (|t|, t).
        ShiftMode::ZeroPad => {
            let mut ts = vec![0.0];
            for j in 1..p {
                ts.push(-(j as f64) * h);
                ts.push(j as f64 * h);
            }
            ts
        }
    }
}

/// Best shift-and-scale registration of `x` onto `reference`.
///
/// The shift is searched over grid-multiple candidates; for each shift the
/// optimal scale is the least-squares solution `a* = ⟨ref, x_t⟩ / ‖x_t‖²`
/// (zero when `x_t` vanishes). Ties break to the smallest `|t|`, then the
/// smallest `t`.
pub fn align_to(
    reference: &DiscretizedSignal,
    x: &DiscretizedSignal,
    mode: ShiftMode,
) -> Result<Alignment> {
    reference.same_grid(x)?;
    let mut best: Option<(f64, f64, f64, DiscretizedSignal)> = None;
    for t in candidate_shifts(x, mode) {
        let xt = x.shift(t, mode);
        let denom = xt.l2_norm_sq();
        let scale = if denom > 0.0 { reference.dot(&xt) / denom } else { 0.0 };
        let objective: f64 = reference
            .values()
            .iter()
            .zip(xt.values())
            .map(|(r, v)| {
                let d = r - scale * v;
                d * d
            })
            .sum::<f64>()
            * x.grid().step();
        if best.as_ref().map_or(true, |(o, _, _, _)| objective < *o) {
            best = Some((objective, t, scale, xt));
        }
    }
    let (_, shift_t, scale, xt) = best.expect("candidate list is never empty");
    let aligned = DiscretizedSignal::new(
        xt.grid(),
        xt.values().iter().map(|v| scale * v).collect(),
    )?;
    Ok(Alignment {
        shift_t,
        scale,
        aligned,
    })
}

/// Align every member of `sample` to the sample medoid.
pub fn align_sample(sample: &[DiscretizedSignal], mode: ShiftMode) -> Result<AlignmentResult> {
    let medoid_idx = medoid(sample)?;
    let reference = &sample[medoid_idx];
    let entries = sample
        .iter()
        .map(|x| align_to(reference, x, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(AlignmentResult {
        medoid: medoid_idx,
        entries,
    })
}

/// Align-then-test: register the pooled sample to its medoid, then run the
/// base-kernel permutation test on the aligned pool.
pub fn align_then_test(
    x: &[DiscretizedSignal],
    y: &[DiscretizedSignal],
    kernel: &GaussianKernel,
    mode: ShiftMode,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestReport> {
    let (n, m) = (x.len(), y.len());
    if n < 2 || m < 2 {
        return Err(Error::SampleTooSmall { n, m });
    }
    let mut pool: Vec<DiscretizedSignal> = x.to_vec();
    pool.extend(y.iter().cloned());
    let reference = &pool[medoid(&pool)?];
    let aligned: Vec<DiscretizedSignal> = pool
        .iter()
        .map(|s| align_to(reference, s, mode).map(|a| a.aligned))
        .collect::<Result<_>>()?;
    let gram = build_gram(&aligned, n, &KernelSpec::Base(*kernel), None)?;
    permutation_test(&gram, b, alpha, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Grid;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sig(values: &[f64]) -> DiscretizedSignal {
        let grid = Grid::new(0.0, 2.0, values.len()).unwrap();
        DiscretizedSignal::new(grid, values.to_vec()).unwrap()
    }

    fn random_signal(rng: &mut ChaCha8Rng, grid: Grid) -> DiscretizedSignal {
        DiscretizedSignal::new(
            grid,
            (0..grid.n_points())
                .map(|_| rng.random_range(-1.5..1.5))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn medoid_of_single_signal() {
        assert_eq!(medoid(&[sig(&[1.0, 2.0, 3.0])]).unwrap(), 0);
    }

    #[test]
    fn medoid_of_collinear_triple() {
        // Scalar multiples of one shape at positions 0, 1, 10: the middle
        // one has distance sum 1 + 9 = 10, smaller than 1 + 11 and 9 + 11.
        let shape = [1.0, 0.0, 0.0];
        let scaled = |c: f64| sig(&shape.map(|v| c * v));
        let sample = vec![scaled(0.0), scaled(1.0), scaled(10.0)];
        assert_eq!(medoid(&sample).unwrap(), 1);
    }

    #[test]
    fn medoid_matches_exhaustive_oracle() {
        let grid = Grid::new(0.0, 1.0, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sample: Vec<DiscretizedSignal> =
            (0..8).map(|_| random_signal(&mut rng, grid)).collect();
        // Oracle: recompute every distance sum with the full double loop.
        let mut best = 0;
        let mut best_sum = f64::INFINITY;
        for i in 0..sample.len() {
            let mut sum = 0.0;
            for j in 0..sample.len() {
                if i != j {
                    sum += sample[i].l2_dist(&sample[j]).unwrap();
                }
            }
            if sum < best_sum {
                best_sum = sum;
                best = i;
            }
        }
        assert_eq!(medoid(&sample).unwrap(), best);
    }

    #[test]
    fn medoid_is_permutation_equivariant() {
        let grid = Grid::new(0.0, 1.0, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let sample: Vec<DiscretizedSignal> =
            (0..5).map(|_| random_signal(&mut rng, grid)).collect();
        let idx = medoid(&sample).unwrap();
        let mut rotated = sample.clone();
        rotated.rotate_left(2);
        let idx_rot = medoid(&rotated).unwrap();
        assert_eq!(rotated[idx_rot], sample[idx]);
    }

    #[test]
    fn self_alignment_is_identity() {
        let x = sig(&[0.5, -1.0, 2.0, 0.3, 0.5]);
        let a = align_to(&x, &x, ShiftMode::PeriodicWrap).unwrap();
        assert_eq!(a.shift_t, 0.0);
        assert!((a.scale - 1.0).abs() < 1e-12);
        assert!(x.l2_dist(&a.aligned).unwrap() < 1e-12);
    }

    #[test]
    fn alignment_inverts_shift_and_scale() {
        // x = 2·shift(ref, t0): aligning x onto ref recovers the inverse
        // shift -t0 (mod period) and the scale 1/2.
        let reference = sig(&[1.0, -0.4, 0.8, 2.0, 1.0]);
        let h = reference.grid().step();
        let t0 = 3.0 * h;
        let shifted = reference.shift(t0, ShiftMode::PeriodicWrap);
        let x = DiscretizedSignal::new(
            shifted.grid(),
            shifted.values().iter().map(|v| 2.0 * v).collect(),
        )
        .unwrap();
        let a = align_to(&reference, &x, ShiftMode::PeriodicWrap).unwrap();
        let period = reference.grid().span();
        assert!((a.shift_t - (period - t0)).abs() < 1e-9);
        assert!((a.scale - 0.5).abs() < 1e-9);
        assert!(reference.l2_dist(&a.aligned).unwrap() < 1e-9);
    }

    #[test]
    fn alignment_matches_exhaustive_scan_oracle() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let reference = random_signal(&mut rng, grid);
        let x = random_signal(&mut rng, grid);
        for mode in [ShiftMode::PeriodicWrap, ShiftMode::ZeroPad] {
            let a = align_to(&reference, &x, mode).unwrap();
            let returned_obj: f64 = reference
                .values()
                .iter()
                .zip(a.aligned.values())
                .map(|(r, v)| (r - v) * (r - v))
                .sum();
            // Oracle: every candidate shift with its own closed-form scale.
            for t in candidate_shifts(&x, mode) {
                let xt = x.shift(t, mode);
                let denom = xt.l2_norm_sq();
                let scale = if denom > 0.0 {
                    reference.dot(&xt) / denom
                } else {
                    0.0
                };
                let obj: f64 = reference
                    .values()
                    .iter()
                    .zip(xt.values())
                    .map(|(r, v)| (r - scale * v) * (r - scale * v))
                    .sum();
                assert!(returned_obj <= obj + 1e-12);
            }
        }
    }

    #[test]
    fn objective_never_worse_than_unaligned() {
        let grid = Grid::new(0.0, 1.0, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let reference = random_signal(&mut rng, grid);
            let x = random_signal(&mut rng, grid);
            let a = align_to(&reference, &x, ShiftMode::PeriodicWrap).unwrap();
            let aligned_obj = reference.l2_dist(&a.aligned).unwrap();
            let raw_obj = reference.l2_dist(&x).unwrap();
            assert!(aligned_obj <= raw_obj + 1e-12);
        }
    }

    #[test]
    fn alignment_is_idempotent_on_single_shape() {
        // A sample of shifted and scaled copies of one shape collapses onto
        // the medoid; a second alignment pass is then the identity.
        let shape = sig(&[0.2, 1.4, -0.6, 0.9, 0.2]);
        let h = shape.grid().step();
        let sample: Vec<DiscretizedSignal> = [(0usize, 1.0), (1, 2.0), (3, 0.5), (2, 1.5)]
            .iter()
            .map(|&(j, c)| {
                let s = shape.shift(j as f64 * h, ShiftMode::PeriodicWrap);
                DiscretizedSignal::new(s.grid(), s.values().iter().map(|v| c * v).collect())
                    .unwrap()
            })
            .collect();
        let first = align_sample(&sample, ShiftMode::PeriodicWrap).unwrap();
        let aligned: Vec<DiscretizedSignal> =
            first.entries.iter().map(|e| e.aligned.clone()).collect();
        let second = align_sample(&aligned, ShiftMode::PeriodicWrap).unwrap();
        for e in &second.entries {
            assert_eq!(e.shift_t, 0.0);
            assert!((e.scale - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn scale_only_perturbation_is_absorbed() {
        let shape = sig(&[0.2, 1.4, -0.6, 0.9, 0.2]);
        let doubled = DiscretizedSignal::new(
            shape.grid(),
            shape.values().iter().map(|v| 2.0 * v).collect(),
        )
        .unwrap();
        let a = align_to(&shape, &doubled, ShiftMode::PeriodicWrap).unwrap();
        assert!((a.scale - 0.5).abs() < 1e-12);
        assert!(shape.l2_dist(&a.aligned).unwrap() < 1e-9);
    }
}
