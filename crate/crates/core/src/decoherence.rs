//! Decoherence function `Γ(t)`: exact comb sum, fitted quadratic, periodic
//! closed form, and the critical-frequency and period predictors built on them.

use std::f64::consts::PI;

use crate::error::{ensure, Result};
use crate::grid::TimeGrid;
use crate::harmonic::harmonic_sums_real;
use crate::noise::NoiseSpec;

/// Linear coefficient of the fitted decoherence function (≈ π/2).
pub const FIT_LINEAR: f64 = 1.57;
/// Quadratic coefficient of the fitted decoherence function (≈ 1/4).
pub const FIT_QUADRATIC: f64 = 0.2498;
/// Oscillation-period constant `T ω0` used by every predictor (≈ 2π).
pub const PERIOD_CONSTANT: f64 = 6.285;

/// Which representation of `Γ` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaModel {
    /// Finite comb sum over the modes of a [`NoiseSpec`].
    ExactSum(NoiseSpec),
    /// `1.57 α² ω0 t − 0.2498 α² ω0² t²`, first period only, white noise.
    FittedQuadratic { alpha: f64, omega0: f64 },
    /// Infinite-cutoff white-noise limit, periodic with period `2π/ω0`.
    ClosedFormPeriodic { alpha: f64, omega0: f64 },
}

impl GammaModel {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            GammaModel::ExactSum(ref spec) => gamma_exact(spec, t),
            GammaModel::FittedQuadratic { alpha, omega0 } => gamma_fitted(alpha, omega0, t),
            GammaModel::ClosedFormPeriodic { alpha, omega0 } => gamma_closed_form(alpha, omega0, t),
        }
    }
}

/// `Γ(t) = 2α²ω0² Σ [jF(j)]² sin²(ωj t / 2) / ωj²`.
pub fn gamma_exact(spec: &NoiseSpec, t: f64) -> f64 {
    let sum: f64 = spec
        .modes()
        .map(|j| {
            let s = (0.5 * spec.mode_frequency(j) * t).sin();
            let w = spec.amplitude(j) / j as f64;
            w * w * s * s
        })
        .sum();
    2.0 * spec.alpha() * spec.alpha() * sum
}

/// `dΓ/dt = α²ω0² Σ [jF(j)]² sin(ωj t) / ωj`, term-wise analytic derivative.
pub fn gamma_dot(spec: &NoiseSpec, t: f64) -> f64 {
    let sum: f64 = spec
        .modes()
        .map(|j| {
            let a = spec.amplitude(j);
            a * a / j as f64 * (spec.mode_frequency(j) * t).sin()
        })
        .sum();
    spec.alpha() * spec.alpha() * spec.omega0() * sum
}

/// `Γ` on every grid point (fast harmonic-sum route).
pub fn gamma_exact_on(spec: &NoiseSpec, grid: &TimeGrid) -> Vec<f64> {
    gamma_exact_from(spec, 0.0, grid.dt(), grid.len())
}

/// `Γ(t0 + k dt)` for `k = 0..count`.
pub(crate) fn gamma_exact_from(spec: &NoiseSpec, t0: f64, dt: f64, count: usize) -> Vec<f64> {
    // Γ = α² Σ w_j (1 − cos(ωj t)),  w_j = [jF(j)]² / j²
    let weights: Vec<f64> = spec
        .modes()
        .map(|j| {
            let a = spec.amplitude(j) / j as f64;
            a * a
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let a2 = spec.alpha() * spec.alpha();
    let w0 = spec.omega0();
    harmonic_sums_real(&weights, w0 * t0, w0 * dt, count)
        .into_iter()
        .map(|z| (a2 * (total - z.re)).max(0.0))
        .collect()
}

/// `dΓ/dt` on every grid point.
pub fn gamma_dot_on(spec: &NoiseSpec, grid: &TimeGrid) -> Vec<f64> {
    let weights: Vec<f64> = spec
        .modes()
        .map(|j| {
            let a = spec.amplitude(j);
            a * a / j as f64
        })
        .collect();
    let scale = spec.alpha() * spec.alpha() * spec.omega0();
    let mut out: Vec<f64> = harmonic_sums_real(&weights, 0.0, spec.omega0() * grid.dt(), grid.len())
        .into_iter()
        .map(|z| scale * z.im)
        .collect();
    out[0] = 0.0;
    out
}

/// Fitted quadratic `Γ'(t) = 1.57 α² ω0 t − 0.2498 α² ω0² t²`.
pub fn gamma_fitted(alpha: f64, omega0: f64, t: f64) -> f64 {
    let a2 = alpha * alpha;
    FIT_LINEAR * a2 * omega0 * t - FIT_QUADRATIC * a2 * omega0 * omega0 * t * t
}

/// [`gamma_fitted`] restricted to the domain it was fitted on:
/// `0 ≤ ω0 t ≤ 6.285` and `0 ≤ α ≤ 1`.
pub fn gamma_fitted_checked(alpha: f64, omega0: f64, t: f64) -> Result<f64> {
    ensure((0.0..=1.0).contains(&alpha), "alpha", alpha, "fitted form covers 0 <= alpha <= 1")?;
    ensure(omega0 > 0.0, "omega0", omega0, "must be positive")?;
    let phase = omega0 * t;
    ensure(
        (0.0..=PERIOD_CONSTANT).contains(&phase),
        "omega0*t",
        phase,
        "fitted form covers the first oscillation period only",
    )?;
    Ok(gamma_fitted(alpha, omega0, t))
}

/// Infinite-cutoff white-noise limit.
///
/// With `Σ_{j≥1} sin²(jy)/j² = y(π − y)/2` on `[0, π]` and `y = ω0 t / 2`
/// reduced mod π, `Γ∞(t) = α² y (π − y)`; on the first period this is
/// `α² (π ω0 t / 2 − ω0² t² / 4)`.
pub fn gamma_closed_form(alpha: f64, omega0: f64, t: f64) -> f64 {
    let y = (0.5 * omega0 * t).rem_euclid(PI);
    alpha * alpha * y * (PI - y)
}

/// Smallest base frequency giving non-Markovian dynamics on `[0, t_max]`:
/// `ω0^c = 1.57 / (0.4996 t_max)`.
pub fn critical_omega0(t_max: f64) -> Result<f64> {
    ensure(t_max.is_finite() && t_max > 0.0, "t_max", t_max, "must be positive")?;
    Ok(FIT_LINEAR / (2.0 * FIT_QUADRATIC * t_max))
}

/// Oscillation period `T = 6.285 / ω0` of `Γ`.
pub fn oscillation_period(omega0: f64) -> Result<f64> {
    ensure(omega0.is_finite() && omega0 > 0.0, "omega0", omega0, "must be positive")?;
    Ok(PERIOD_CONSTANT / omega0)
}

/// Least-squares fit of `a t + b t²` (no intercept) to samples.
pub fn fit_linear_quadratic(ts: &[f64], values: &[f64]) -> (f64, f64) {
    let (mut s2, mut s3, mut s4, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(values) {
        let t2 = t * t;
        s2 += t2;
        s3 += t2 * t;
        s4 += t2 * t2;
        y1 += y * t;
        y2 += y * t2;
    }
    let det = s2 * s4 - s3 * s3;
    ((y1 * s4 - y2 * s3) / det, (s2 * y2 - s3 * y1) / det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn white(alpha: f64, omega0: f64) -> NoiseSpec {
        NoiseSpec::white(alpha, omega0, 50.0).unwrap()
    }

    #[test]
    fn gamma_vanishes_at_origin() {
        let s = white(0.5, 0.05);
        assert_eq!(gamma_exact(&s, 0.0), 0.0);
        assert_eq!(gamma_dot(&s, 0.0), 0.0);
        assert_eq!(gamma_fitted(0.5, 0.05, 0.0), 0.0);
        assert_eq!(gamma_closed_form(0.5, 0.05, 0.0), 0.0);
    }

    #[test]
    fn full_period_returns_near_zero() {
        let s = white(0.5, 0.06285);
        let peak = gamma_exact(&s, 0.5 * 100.0);
        assert!(gamma_exact(&s, 100.0) < 0.01 * peak);
    }

    #[test]
    fn exact_sum_tracks_closed_form() {
        let s = white(0.5, 0.05);
        let exact = gamma_exact(&s, 30.0);
        let oracle = gamma_closed_form(0.5, 0.05, 30.0);
        assert!((exact / oracle - 1.0).abs() < 0.01, "{exact} vs {oracle}");
    }

    #[test]
    fn fitted_value_by_hand() {
        // 1.57·0.25·0.05·50 − 0.2498·0.25·0.0025·2500
        let want = 0.98125 - 0.39031250;
        assert!((gamma_fitted(0.5, 0.05, 50.0) - want).abs() < 1e-12);
        assert!((gamma_fitted(0.5, 0.05, 50.0) - 0.5909375).abs() < 1e-12);
    }

    #[test]
    fn fitted_domain_is_enforced() {
        assert!(gamma_fitted_checked(0.5, 0.06285, 100.0).is_ok());
        assert!(gamma_fitted_checked(0.5, 0.06285, 101.0).is_err());
        assert!(gamma_fitted_checked(1.5, 0.01, 1.0).is_err());
        assert!(gamma_fitted_checked(0.5, 0.01, -1.0).is_err());
    }

    #[test]
    fn critical_frequency_values() {
        assert!((critical_omega0(100.0).unwrap() - 0.0314).abs() < 5e-5);
        assert!((critical_omega0(50.0).unwrap() - 0.0629).abs() < 5e-5);
        assert!((critical_omega0(200.0).unwrap() - 0.0158).abs() < 1e-4);
        let r = critical_omega0(80.0).unwrap() / critical_omega0(160.0).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        assert!(critical_omega0(0.0).is_err());
    }

    #[test]
    fn period_values() {
        assert!((oscillation_period(0.06285).unwrap() - 100.0).abs() < 1e-9);
        assert!((oscillation_period(0.2514).unwrap() - 25.0).abs() < 1e-3);
        assert!((oscillation_period(6.285).unwrap() - 1.0).abs() < 1e-12);
        assert!(oscillation_period(0.0).is_err());
    }

    #[test]
    fn first_sign_change_of_derivative_is_half_period() {
        let w0 = 0.05;
        let s = white(0.5, w0);
        let half = std::f64::consts::PI / w0;
        assert!(gamma_dot(&s, half * 0.99) > 0.0);
        assert!(gamma_dot(&s, half * 1.01) < 0.0);
    }

    #[test]
    fn grid_routes_match_pointwise() {
        let s = white(0.5, 0.03);
        let grid = TimeGrid::new(100.0, 2001).unwrap();
        let g = gamma_exact_on(&s, &grid);
        let d = gamma_dot_on(&s, &grid);
        for k in [0, 3, 777, 2000] {
            let t = grid.at(k);
            assert!((g[k] - gamma_exact(&s, t)).abs() < 1e-12);
            assert!((d[k] - gamma_dot(&s, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_quadratic_fit_recovers_exact_polynomial() {
        let ts: Vec<f64> = (0..50).map(|k| k as f64 * 0.3).collect();
        let ys: Vec<f64> = ts.iter().map(|t| 2.0 * t - 0.5 * t * t).collect();
        let (a, b) = fit_linear_quadratic(&ts, &ys);
        assert!((a - 2.0).abs() < 1e-10 && (b + 0.5).abs() < 1e-10);
    }

    #[test]
    fn models_dispatch() {
        let s = white(0.5, 0.05);
        assert_eq!(GammaModel::ExactSum(s).eval(7.0), gamma_exact(&s, 7.0));
        let f = GammaModel::FittedQuadratic { alpha: 0.5, omega0: 0.05 };
        assert_eq!(f.eval(7.0), gamma_fitted(0.5, 0.05, 7.0));
    }
}
