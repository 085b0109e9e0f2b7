//! Uniform time grids and sampled scalar traces.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Default number of samples per evaluation window.
pub const DEFAULT_POINTS: usize = 2001;

/// Uniform grid `t_k = k * t_max / (n_points - 1)` on `[0, t_max]` (ms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_points: usize) -> Result<Self> {
        ensure(t_max.is_finite() && t_max > 0.0, "t_max", t_max, "must be positive")?;
        ensure(n_points >= 2, "n_points", n_points as f64, "need at least two points")?;
        Ok(Self { t_max, n_points })
    }

    /// Grid over `[0, t_max]` with [`DEFAULT_POINTS`] samples.
    pub fn window(t_max: f64) -> Result<Self> {
        Self::new(t_max, DEFAULT_POINTS)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.n_points - 1) as f64
    }

    pub fn at(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.t_max
        } else {
            k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.at(k))
    }

    /// Same spacing, `factor` times as many intervals.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            t_max: self.t_max,
            n_points: (self.n_points - 1) * factor.max(1) + 1,
        }
    }

    /// Index of the sample nearest to `t` (clamped to the window).
    pub fn nearest_index(&self, t: f64) -> usize {
        let k = (t / self.dt()).round();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.n_points - 1)
        }
    }
}

/// A scalar time series sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl Trace {
    /// Panics if the lengths disagree or a value is not finite.
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "trace length must match grid");
        assert!(values.iter().all(|v| v.is_finite()), "trace values must be finite");
        Self { grid, values }
    }

    pub fn from_fn(grid: TimeGrid, f: impl FnMut(f64) -> f64) -> Self {
        let values = grid.times().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid.at(k)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sample nearest to `t`.
    pub fn value_near(&self, t: f64) -> f64 {
        self.values[self.grid.nearest_index(t)]
    }

    /// Composite trapezoid rule over the whole window.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.grid.dt())
    }
}

pub(crate) fn trapezoid(values: &[f64], dt: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => dt * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = TimeGrid::new(100.0, 2001).unwrap();
        assert_eq!(g.at(0), 0.0);
        assert_eq!(g.at(2000), 100.0);
        assert!((g.dt() - 0.05).abs() < 1e-15);
        assert_eq!(g.nearest_index(25.01), 500);
        assert_eq!(g.nearest_index(-3.0), 0);
        assert_eq!(g.nearest_index(1e9), 2000);
    }

    #[test]
    fn grid_rejects_degenerate_windows() {
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
        assert!(TimeGrid::new(f64::NAN, 10).is_err());
    }

    #[test]
    fn refined_grid_keeps_the_window() {
        let g = TimeGrid::new(50.0, 2001).unwrap().refined(10);
        assert_eq!(g.len(), 20001);
        assert_eq!(g.t_max(), 50.0);
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = TimeGrid::new(2.0, 11).unwrap();
        let tr = Trace::from_fn(g, |t| 3.0 * t + 1.0);
        assert!((tr.integral() - 8.0).abs() < 1e-12);
    }
}
