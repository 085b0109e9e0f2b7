//! Trace distance and the BLP non-Markovianity measure.
//!
//! For the antipodal input pairs of every reference basis the trace distance
//! is `D(t) = exp(−2Γ(t))`, so the measure reduces to
//!
//! ```text
//! N = −2 ∫_{Γ̇<0} Γ̇ e^{−2Γ} dt = Σ_intervals [D(t_end) − D(t_start)]
//! ```
//!
//! The intervals where `Γ̇ < 0` are bracketed on the window grid and their
//! endpoints refined by bisection; the integral is then exact.

use serde::Serialize;

use crate::channel::{analytic_states_on, transform_basis, DephasingParams};
use crate::decoherence::{critical_omega0, gamma_dot, gamma_dot_on, gamma_exact, FIT_LINEAR, FIT_QUADRATIC};
use crate::error::{ensure, Result};
use crate::grid::{TimeGrid, Trace};
use crate::noise::NoiseSpec;
use crate::state::{hermitian_eigenvalues, Basis, DensityMatrix};

/// Endpoint resolution of the `Γ̇ < 0` intervals (ms).
pub const ROOT_TOL: f64 = 1e-6;

/// `½ ‖ρ1 − ρ2‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let [l0, l1] = hermitian_eigenvalues(a.rho00() - b.rho00(), a.rho01() - b.rho01(), a.rho11() - b.rho11());
    0.5 * (l0.abs() + l1.abs())
}

/// BLP measure over a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlpReport {
    pub window: TimeGrid,
    pub measure: f64,
    /// Disjoint, ordered `(t_start, t_end)` intervals with `Γ̇ < 0`.
    pub increasing_intervals: Vec<(f64, f64)>,
    /// Earliest time at which the measure becomes positive.
    pub onset: Option<f64>,
}

impl BlpReport {
    pub fn is_markovian(&self) -> bool {
        self.increasing_intervals.is_empty()
    }
}

/// BLP non-Markovianity of the dephasing channel on `window`.
pub fn blp_measure(spec: &NoiseSpec, window: &TimeGrid) -> BlpReport {
    let rate = gamma_dot_on(spec, window);
    let f = |t: f64| gamma_dot(spec, t);
    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    for k in 1..rate.len() {
        let (prev, cur) = (rate[k - 1], rate[k]);
        match open {
            None if cur < 0.0 && prev >= 0.0 => {
                open = Some(bisect(&f, window.at(k - 1), window.at(k)));
            }
            None if cur < 0.0 => open = Some(window.at(k - 1)),
            Some(start) if cur >= 0.0 => {
                intervals.push((start, bisect(&f, window.at(k - 1), window.at(k))));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        intervals.push((start, window.t_max()));
    }

    let distance = |t: f64| (-2.0 * gamma_exact(spec, t)).exp();
    let measure = intervals
        .iter()
        .map(|&(a, b)| (distance(b) - distance(a)).max(0.0))
        .sum();
    BlpReport {
        window: *window,
        measure,
        onset: intervals.first().map(|iv| iv.0),
        increasing_intervals: intervals,
    }
}

/// Root of `f` in `[lo, hi]` given a sign change between the ends.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = f(lo) < 0.0;
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `D(ρ1(t), ρ2(t))` for the canonical antipodal pair of `basis`, evolved and
/// expressed in that basis.
pub fn trace_distance_trace(spec: &NoiseSpec, params: DephasingParams, basis: Basis, grid: &TimeGrid) -> Trace {
    let (a, b) = basis.canonical_pair();
    let ea = analytic_states_on(spec, params, &a, grid);
    let eb = analytic_states_on(spec, params, &b, grid);
    let values = ea
        .iter()
        .zip(&eb)
        .map(|(x, y)| trace_distance(&transform_basis(x, basis), &transform_basis(y, basis)))
        .collect();
    Trace::new(*grid, values)
}

/// Sum of the positive increments of a sampled trace.
pub fn positive_variation(trace: &Trace) -> f64 {
    trace.values().windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

/// Earliest non-Markovian time, by formula and from the first zero of `Γ̇`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Onset {
    /// `1.57 / (0.4996 ω0)`
    pub analytic: f64,
    /// First `+ → −` sign change of `Γ̇`, if found within twice the analytic value.
    pub numeric: Option<f64>,
}

pub fn earliest_nonmarkov_time(spec: &NoiseSpec) -> Onset {
    let analytic = FIT_LINEAR / (2.0 * FIT_QUADRATIC * spec.omega0());
    let window = TimeGrid::new(2.0 * analytic, 4001).expect("positive window");
    let report = blp_measure(spec, &window);
    Onset {
        analytic,
        numeric: report.onset,
    }
}

/// Result of the numerical critical-frequency search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalSearch {
    /// Smallest ω0 (to `tol`) with `N > 0` on `[0, t_max]`.
    pub numeric: f64,
    /// `1.57 / (0.4996 t_max)`.
    pub predicted: f64,
    pub evaluations: usize,
}

/// Bisects on ω0 for the Markovian → non-Markovian transition on a window.
pub fn find_critical_omega0(alpha: f64, omega_j: f64, window: &TimeGrid, tol: f64) -> Result<CriticalSearch> {
    ensure(tol > 0.0, "tol", tol, "must be positive")?;
    let predicted = critical_omega0(window.t_max())?;
    let mut evaluations = 0;
    let mut nonmarkovian = |w0: f64| -> Result<bool> {
        evaluations += 1;
        let spec = NoiseSpec::white(alpha, w0, omega_j)?;
        Ok(blp_measure(&spec, window).measure > 0.0)
    };
    let (mut lo, mut hi) = (0.5 * predicted, 2.0 * predicted);
    while nonmarkovian(lo)? {
        lo *= 0.5;
        ensure(lo > 1e-12, "omega0", lo, "no Markovian bracket found")?;
    }
    while !nonmarkovian(hi)? {
        hi *= 2.0;
        ensure(hi <= omega_j, "omega0", hi, "no non-Markovian bracket below the cutoff")?;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if nonmarkovian(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalSearch {
        numeric: hi,
        predicted,
        evaluations,
    })
}
