//! Discretized signals on uniform grids.
//!
//! A signal is a vector of samples `x(t_1), ..., x(t_p)` on the uniform grid
//! `t_k = a + (k-1)(b-a)/(p-1)`. The squared L² norm uses the Riemann-type
//! rule `(b-a)/(p-1) · Σ x²(t_k)`. Two shift actions are provided: periodic
//! wrapping, which treats the signal as `(b-a)`-periodic with `t_p`
//! identified with `t_1`, and zero padding, which extends the signal by zero
//! outside `[a, b]`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Uniform sampling grid on `[a, b]` with `p >= 2` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    p: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, p: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b <= a {
            return Err(Error::InvalidConfig(format!(
                "grid interval [{a}, {b}] must be finite with b > a"
            )));
        }
        if p < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 points, got {p}"
            )));
        }
        Ok(Self { a, b, p })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of grid points `p`.
    pub fn n_points(&self) -> usize {
        self.p
    }

    /// Interval length `b - a`.
    pub fn span(&self) -> f64 {
        self.b - self.a
    }

    /// Grid step `(b - a)/(p - 1)`.
    pub fn step(&self) -> f64 {
        (self.b - self.a) / (self.p - 1) as f64
    }

    /// The point `t_{k+1} = a + k·step` (zero-based `k`).
    pub fn point(&self, k: usize) -> f64 {
        self.a + k as f64 * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.p).map(move |k| self.point(k))
    }
}

/// Interpolation convention used by [`DiscretizedSignal::shift`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftMode {
    /// Treat the signal as `(b-a)`-periodic; `t_p` is identified with `t_1`.
    PeriodicWrap,
    /// The signal is zero outside `[a, b]`.
    ZeroPad,
}

/// A function sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedSignal {
    grid: Grid,
    values: Vec<f64>,
}

/// Interpolation queries within `snap` of a grid node return the node value,
/// so grid-multiple shifts are exact sample permutations.
const NODE_SNAP: f64 = 1e-9;

fn sample_linear(values: &[f64], s: f64) -> f64 {
    let i = s.floor();
    let frac = s - i;
    let i = i as usize;
    if frac <= NODE_SNAP {
        return values[i];
    }
    if frac >= 1.0 - NODE_SNAP {
        return values[i + 1];
    }
    values[i] * (1.0 - frac) + values[i + 1] * frac
}

impl DiscretizedSignal {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidConfig(format!(
                "signal has {} values but grid has {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "signal values must be finite".to_string(),
            ));
        }
        Ok(Self { grid, values })
    }

    /// Sample `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(self.grid, other.grid));
        }
        Ok(())
    }

    /// Squared L² norm `(b-a)/(p-1) · Σ x²(t_k)`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.step() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// L² distance `sqrt(‖x - y‖²)` on a shared grid.
    pub fn l2_dist(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        Ok((self.grid.step() * sum).sqrt())
    }

    /// Quadrature inner product `(b-a)/(p-1) · Σ x(t_k) y(t_k)`.
    pub(crate) fn dot(&self, other: &Self) -> f64 {
        self.grid.step()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x * y)
                .sum::<f64>()
    }

    /// The shifted signal `u ↦ x(u - t)` sampled on the same grid.
    ///
    /// Values at `t_k - t` are obtained by linear interpolation, wrapping
    /// modulo `b - a` for [`ShiftMode::PeriodicWrap`] and returning zero
    /// outside `[a, b]` for [`ShiftMode::ZeroPad`].
    pub fn shift(&self, t: f64, mode: ShiftMode) -> Self {
        let p = self.grid.n_points();
        let h = self.grid.step();
        let values: Vec<f64> = match mode {
            ShiftMode::PeriodicWrap => {
                // Offset in grid units over the fundamental cycle of p-1 cells.
                let cycle = (p - 1) as f64;
                let off = (t / h).rem_euclid(cycle);
                (0..p)
                    .map(|k| {
                        let mut s = k as f64 - off;
                        if s < 0.0 {
                            s += cycle;
                        }
                        sample_linear(&self.values, s)
                    })
                    .collect()
            }
            ShiftMode::ZeroPad => {
                let off = t / h;
                (0..p)
                    .map(|k| {
                        let s = k as f64 - off;
                        if s < -NODE_SNAP || s > (p - 1) as f64 + NODE_SNAP {
                            0.0
                        } else {
                            sample_linear(&self.values, s.clamp(0.0, (p - 1) as f64))
                        }
                    })
                    .collect()
            }
        };
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Rescale to zero mean and unit standard deviation (divisor `p`).
    pub fn standardize(&self) -> Result<Self> {
        let first = self.values[0];
        if self.values.iter().all(|&v| v == first) {
            return Err(Error::ZeroVariance);
        }
        let p = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / p;
        let var = self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / p;
        let sd = var.sqrt();
        if sd == 0.0 {
            return Err(Error::ZeroVariance);
        }
        let values = self.values.iter().map(|v| (v - mean) / sd).collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }
}

/// Write signals in the signal CSV format: a `# grid a b p` header line, then
/// one row of `p` comma-separated values per signal.
pub fn write_signals_csv<W: Write>(w: &mut W, signals: &[DiscretizedSignal]) -> Result<()> {
    let Some(first) = signals.first() else {
        return Err(Error::EmptyInput);
    };
    let grid = first.grid();
    writeln!(w, "# grid {} {} {}", grid.a(), grid.b(), grid.n_points())?;
    for s in signals {
        s.same_grid(first)?;
        let row: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Read signals written by [`write_signals_csv`]. Lines starting with `#`
/// other than the grid header are ignored.
pub fn read_signals_csv<R: BufRead>(r: R) -> Result<Vec<DiscretizedSignal>> {
    let mut grid: Option<Grid> = None;
    let mut signals = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(spec) = rest.strip_prefix("grid") {
                if grid.is_some() {
                    return Err(Error::Format(format!(
                        "line {}: duplicate grid header",
                        lineno + 1
                    )));
                }
                let parts: Vec<&str> = spec.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(Error::Format(format!(
                        "line {}: grid header needs `a b p`",
                        lineno + 1
                    )));
                }
                let a: f64 = parts[0]
                    .parse()
                    .map_err(|_| Error::Format(format!("line {}: bad grid start", lineno + 1)))?;
                let b: f64 = parts[1]
                    .parse()
                    .map_err(|_| Error::Format(format!("line {}: bad grid end", lineno + 1)))?;
                let p: usize = parts[2]
                    .parse()
                    .map_err(|_| Error::Format(format!("line {}: bad point count", lineno + 1)))?;
                grid = Some(Grid::new(a, b, p)?);
            }
            continue;
        }
        let Some(grid) = grid else {
            return Err(Error::Format(format!(
                "line {}: data before `# grid a b p` header",
                lineno + 1
            )));
        };
        let values: Vec<f64> = trimmed
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("line {}: bad value `{f}`", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        signals.push(DiscretizedSignal::new(grid, values)?);
    }
    if grid.is_none() {
        return Err(Error::Format("missing `# grid a b p` header".to_string()));
    }
    Ok(signals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(a: f64, b: f64, values: &[f64]) -> DiscretizedSignal {
        let grid = Grid::new(a, b, values.len()).unwrap();
        DiscretizedSignal::new(grid, values.to_vec()).unwrap()
    }

    /// Rotation of the fundamental cycle (first p-1 samples) by `j` steps,
    /// with the seam sample duplicating the new first sample. This is the
    /// index-level meaning of a grid-multiple periodic shift.
    fn rotate_cycle(values: &[f64], j: usize) -> Vec<f64> {
        let c = values.len() - 1;
        let mut out: Vec<f64> = (0..c)
            .map(|k| values[(k + c - (j % c)) % c])
            .collect();
        out.push(out[0]);
        out
    }

    #[test]
    fn norm_of_zero_signal() {
        assert_eq!(sig(0.0, 1.0, &[0.0, 0.0, 0.0]).l2_norm_sq(), 0.0);
    }

    #[test]
    fn norm_of_ones_two_points() {
        assert_eq!(sig(0.0, 1.0, &[1.0, 1.0]).l2_norm_sq(), 2.0);
    }

    #[test]
    fn norm_direct_substitution() {
        assert_eq!(sig(0.0, 2.0, &[0.0, 1.0, 2.0]).l2_norm_sq(), 5.0);
    }

    #[test]
    fn dist_identical_is_zero() {
        let x = sig(0.0, 1.0, &[0.3, -0.7, 1.1]);
        assert_eq!(x.l2_dist(&x).unwrap(), 0.0);
    }

    #[test]
    fn dist_direct_substitution() {
        let x = sig(0.0, 1.0, &[1.0, 1.0]);
        let y = sig(0.0, 1.0, &[0.0, 0.0]);
        assert!((x.l2_dist(&y).unwrap() - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dist_matches_elementwise_oracle() {
        // Oracle: accumulate (x_k - y_k)² explicitly, then apply the rule.
        let x = sig(-1.0, 3.0, &[0.2, -1.4, 2.2, 0.9, -0.5]);
        let y = sig(-1.0, 3.0, &[1.1, 0.3, -0.8, 2.5, 0.0]);
        let mut acc = 0.0;
        for k in 0..5 {
            let d = x.values()[k] - y.values()[k];
            acc += d * d;
        }
        let oracle = (x.grid().step() * acc).sqrt();
        assert!((x.l2_dist(&y).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn dist_grid_mismatch() {
        let x = sig(0.0, 1.0, &[1.0, 2.0]);
        let y = sig(0.0, 2.0, &[1.0, 2.0]);
        assert!(matches!(x.l2_dist(&y), Err(Error::GridMismatch(_, _))));
    }

    #[test]
    fn shift_zero_is_identity() {
        let x = sig(0.0, 3.0, &[1.0, 2.0, 3.0, 1.5]);
        for mode in [ShiftMode::PeriodicWrap, ShiftMode::ZeroPad] {
            assert_eq!(x.shift(0.0, mode).values(), x.values());
        }
    }

    #[test]
    fn shift_full_period_is_identity() {
        let x = sig(0.0, 3.0, &[1.0, 2.0, 3.0, 1.5]);
        let span = x.grid().span();
        assert_eq!(x.shift(span, ShiftMode::PeriodicWrap).values(), x.values());
        assert_eq!(x.shift(-span, ShiftMode::PeriodicWrap).values(), x.values());
    }

    #[test]
    fn shift_one_step_rotates_cycle() {
        let x = sig(0.0, 3.0, &[1.0, 2.0, 3.0, 1.0]);
        let h = x.grid().step();
        let shifted = x.shift(h, ShiftMode::PeriodicWrap);
        assert_eq!(shifted.values(), &[3.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn grid_multiple_shifts_match_rotation_oracle() {
        let x = sig(-2.0, 4.0, &[0.5, -1.0, 2.0, 3.0, -0.7, 1.2, 0.5]);
        let h = x.grid().step();
        for j in 0..10usize {
            let shifted = x.shift(j as f64 * h, ShiftMode::PeriodicWrap);
            let oracle = rotate_cycle(x.values(), j);
            for (a, b) in shifted.values().iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-12, "j={j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn zero_pad_shift_pads_with_zeros() {
        let x = sig(0.0, 3.0, &[1.0, 2.0, 3.0, 4.0]);
        let h = x.grid().step();
        let right = x.shift(2.0 * h, ShiftMode::ZeroPad);
        assert_eq!(right.values(), &[0.0, 0.0, 1.0, 2.0]);
        let left = x.shift(-h, ShiftMode::ZeroPad);
        assert_eq!(left.values(), &[2.0, 3.0, 4.0, 0.0]);
        let gone = x.shift(10.0 * h, ShiftMode::ZeroPad);
        assert!(gone.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fractional_shift_interpolates() {
        let x = sig(0.0, 3.0, &[0.0, 1.0, 2.0, 3.0]);
        let h = x.grid().step();
        let shifted = x.shift(0.5 * h, ShiftMode::ZeroPad);
        // Interior points are midway between neighbours on a linear ramp.
        assert!((shifted.values()[1] - 0.5).abs() < 1e-12);
        assert!((shifted.values()[2] - 1.5).abs() < 1e-12);
        assert!((shifted.values()[3] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn standardize_two_points() {
        let out = sig(0.0, 1.0, &[0.0, 2.0]).standardize().unwrap();
        assert_eq!(out.values(), &[-1.0, 1.0]);
    }

    #[test]
    fn standardize_moments() {
        let x = sig(0.0, 1.0, &[0.4, -2.0, 3.5, 0.1, 7.7, -0.2]);
        let out = x.standardize().unwrap();
        let p = out.values().len() as f64;
        let mean = out.values().iter().sum::<f64>() / p;
        let sd = (out.values().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / p).sqrt();
        assert!(mean.abs() < 1e-12);
        assert!((sd - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standardize_constant_fails() {
        assert!(matches!(
            sig(0.0, 1.0, &[1.5, 1.5, 1.5]).standardize(),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn csv_round_trip() {
        let signals = vec![
            sig(0.0, 2.0, &[0.1, -2.5, 3.25]),
            sig(0.0, 2.0, &[7.0, 0.0, -0.125]),
        ];
        let mut buf = Vec::new();
        write_signals_csv(&mut buf, &signals).unwrap();
        let parsed = read_signals_csv(buf.as_slice()).unwrap();
        assert_eq!(parsed, signals);
    }

    #[test]
    fn csv_rejects_missing_header() {
        let err = read_signals_csv("1.0,2.0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn csv_rejects_wrong_row_length() {
        let err = read_signals_csv("# grid 0 1 3\n1.0,2.0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }
}
