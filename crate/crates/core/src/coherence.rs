//! l1-norm coherence: closed-form traces per reference basis, long-time
//! averages and the coherence-death threshold in the noise strength.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::decoherence::{gamma_exact, gamma_exact_from, gamma_exact_on};
use crate::error::{ensure, Result};
use crate::grid::{TimeGrid, Trace};
use crate::noise::NoiseSpec;
use crate::state::DensityMatrix;

/// `⟨C⟩` below this marks coherence death.
pub const DEATH_THRESHOLD: f64 = 0.01;
/// Default relative tolerance of the time-average convergence loop.
pub const DEFAULT_AVG_TOL: f64 = 1e-3;
/// Samples per shortest oscillation period in time averages.
pub const SAMPLES_PER_PERIOD: f64 = 50.0;
/// Upper limit on horizon doublings.
pub const MAX_DOUBLINGS: u32 = 10;
/// Coarse step of the α scan.
pub const ALPHA_COARSE_STEP: f64 = 0.05;
/// Bisection resolution of α^crit.
pub const ALPHA_RESOLUTION: f64 = 1e-3;

/// `Σ_{i≠j} |ρij|`, which is `2|ρ01|` for a qubit.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    2.0 * rho.rho01().norm()
}

/// σz-basis coherence of a maximally coherent input: `exp(−2Γ(t))`.
pub fn coherence_z(spec: &NoiseSpec, t: f64) -> f64 {
    (-2.0 * gamma_exact(spec, t)).exp()
}

/// The two factors of the σx/σy-basis coherence at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceFactors {
    /// `|cos(ωk t)|`
    pub oscillation: f64,
    /// `exp(−2Γ(t))`
    pub decay: f64,
}

impl CoherenceFactors {
    pub fn coherence(&self) -> f64 {
        self.oscillation * self.decay
    }
}

pub fn coherence_xy_factors(spec: &NoiseSpec, omega_k: f64, t: f64) -> CoherenceFactors {
    CoherenceFactors {
        oscillation: (omega_k * t).cos().abs(),
        decay: coherence_z(spec, t),
    }
}

/// σx/σy-basis coherence for the `φ = π/2` inputs: `|cos(ωk t)| exp(−2Γ(t))`.
pub fn coherence_xy(spec: &NoiseSpec, omega_k: f64, t: f64) -> f64 {
    coherence_xy_factors(spec, omega_k, t).coherence()
}

pub fn coherence_z_trace(spec: &NoiseSpec, grid: &TimeGrid) -> Trace {
    let values = gamma_exact_on(spec, grid).into_iter().map(|g| (-2.0 * g).exp()).collect();
    Trace::new(*grid, values)
}

/// Oscillation, decay and coherence traces for the σx/σy bases.
pub fn coherence_xy_traces(spec: &NoiseSpec, omega_k: f64, grid: &TimeGrid) -> (Trace, Trace, Trace) {
    let decay = coherence_z_trace(spec, grid);
    let osc = Trace::from_fn(*grid, |t| (omega_k * t).cos().abs());
    let coh = osc.values().iter().zip(decay.values()).map(|(a, b)| a * b).collect();
    (osc, decay.clone(), Trace::new(*grid, coh))
}

pub fn coherence_xy_trace(spec: &NoiseSpec, omega_k: f64, grid: &TimeGrid) -> Trace {
    coherence_xy_traces(spec, omega_k, grid).2
}

/// Result of a long-time average of the σx/σy coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeAverage {
    /// `⟨C⟩` over `[0, horizon]`.
    pub value: f64,
    /// `⟨C⟩` over `[0, horizon / 2]`.
    pub half_horizon_value: f64,
    pub horizon: f64,
    pub relative_change: f64,
    pub converged: bool,
}

/// Trapezoid time averages of `|cos(ωk t)| e^{−2α²g(t)}` with `g = Γ/α²`.
///
/// `Γ` has period `P = 2π/ω0` exactly, so the step is `dt = P/m` and `g` is
/// stored for one period only. The trapezoid sum up to step `N` is then
/// `Σ_r e^{−2α²g_r} O_r(N)` with `O_r(N)` the sum of `|cos(ωk k dt)|` over
/// `k ≤ N`, `k ≡ r (mod m)`. Those residue sums do not depend on α and are
/// cached per horizon, so one profile serves every noise strength.
struct LongTimeProfile {
    omega_k: f64,
    dt: f64,
    /// `g` at `k dt`, `k < m`.
    shape: Vec<f64>,
    /// Residue sums accumulated over `k ≤ pos`.
    running: Vec<f64>,
    pos: usize,
    snapshots: BTreeMap<usize, Vec<f64>>,
}

impl LongTimeProfile {
    /// `dt ≤ min(2π/ωk, 2π/ω0) / 50`, and no more than a tenth of the decay
    /// time `1/(α²πω0)` of a revival at the largest α to be evaluated.
    fn new(spec: &NoiseSpec, omega_k: f64, alpha_max: f64) -> Result<Self> {
        let unit = spec.with_alpha(1.0)?;
        let period = TAU / spec.omega0();
        let shortest = match omega_k > 0.0 {
            true => (TAU / omega_k).min(period),
            false => period,
        };
        let mut dt = shortest / SAMPLES_PER_PERIOD;
        if alpha_max > 0.0 {
            dt = dt.min(0.1 / (alpha_max * alpha_max * std::f64::consts::PI * spec.omega0()));
        }
        let m = (period / dt).ceil() as usize;
        let dt = period / m as f64;
        Ok(Self {
            omega_k,
            dt,
            shape: gamma_exact_from(&unit, 0.0, dt, m),
            running: vec![0.0; m],
            pos: 0,
            snapshots: BTreeMap::new(),
        })
    }

    fn steps_for(&self, horizon: f64) -> usize {
        ((horizon / self.dt).round() as usize).max(2)
    }

    fn osc(&self, k: usize) -> f64 {
        (self.omega_k * k as f64 * self.dt).cos().abs()
    }

    fn residue_sums(&mut self, steps: usize) -> &[f64] {
        if !self.snapshots.contains_key(&steps) {
            if steps + 1 < self.pos || self.pos == 0 {
                self.running.iter_mut().for_each(|x| *x = 0.0);
                self.pos = 0;
            }
            let m = self.running.len();
            for k in self.pos..=steps {
                self.running[k % m] += self.osc(k);
            }
            self.pos = steps + 1;
            self.snapshots.insert(steps, self.running.clone());
        }
        &self.snapshots[&steps]
    }

    fn average(&mut self, alpha: f64, steps: usize) -> f64 {
        let a2 = 2.0 * alpha * alpha;
        let m = self.shape.len();
        let decay = |g: f64| (-a2 * g).exp();
        let ends = 0.5 * (decay(self.shape[0]) + self.osc(steps) * decay(self.shape[steps % m]));
        let shape = std::mem::take(&mut self.shape);
        let sum: f64 = shape.iter().zip(self.residue_sums(steps)).map(|(g, o)| decay(*g) * o).sum();
        self.shape = shape;
        (sum - ends) / steps as f64
    }

    fn report(&mut self, alpha: f64, steps: usize, tol: f64) -> TimeAverage {
        let half_value = self.average(alpha, (steps / 2).max(1));
        let value = self.average(alpha, steps);
        let relative_change = relative(value, half_value);
        TimeAverage {
            value,
            half_horizon_value: half_value,
            horizon: steps as f64 * self.dt,
            relative_change,
            converged: relative_change <= tol,
        }
    }

    fn converge(&mut self, alpha: f64, base_steps: usize, tol: f64) -> TimeAverage {
        let mut steps = base_steps;
        let mut last = self.report(alpha, steps, tol);
        for _ in 0..MAX_DOUBLINGS {
            if last.converged {
                break;
            }
            steps *= 2;
            last = self.report(alpha, steps, tol);
        }
        last
    }
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Default starting horizon `20 · max(2π/ω0, 2π/ωk)`.
pub fn default_horizon(omega0: f64, omega_k: f64) -> f64 {
    let slow = if omega_k > 0.0 { (TAU / omega0).max(TAU / omega_k) } else { TAU / omega0 };
    20.0 * slow
}

/// `⟨C⟩ = (1/T) ∫0^T |cos ωk t| e^{−2Γ} dt` at `T = horizon`, with the value at
/// `T/2` and a convergence flag (`relative change ≤ tol`).
pub fn time_avg_coherence(spec: &NoiseSpec, omega_k: f64, horizon: f64, tol: f64) -> Result<TimeAverage> {
    ensure(horizon.is_finite() && horizon > 0.0, "horizon", horizon, "must be positive")?;
    ensure(omega_k.is_finite() && omega_k >= 0.0, "omega_k", omega_k, "must be non-negative")?;
    let mut profile = LongTimeProfile::new(spec, omega_k, spec.alpha())?;
    let steps = profile.steps_for(horizon);
    Ok(profile.report(spec.alpha(), steps, tol))
}

/// Doubles the horizon from `start` (default [`default_horizon`]) until
/// successive averages agree to `tol` or [`MAX_DOUBLINGS`] is reached.
pub fn converged_time_avg(spec: &NoiseSpec, omega_k: f64, start: Option<f64>, tol: f64) -> Result<TimeAverage> {
    ensure(omega_k.is_finite() && omega_k >= 0.0, "omega_k", omega_k, "must be non-negative")?;
    let start = start.unwrap_or_else(|| default_horizon(spec.omega0(), omega_k));
    ensure(start.is_finite() && start > 0.0, "horizon", start, "must be positive")?;
    let mut profile = LongTimeProfile::new(spec, omega_k, spec.alpha())?;
    let steps = profile.steps_for(start);
    Ok(profile.converge(spec.alpha(), steps, tol))
}

/// Converged `⟨C⟩` for each α in `alphas`, sharing one sampled profile.
pub fn time_avg_curve(
    omega0: f64,
    omega_k: f64,
    omega_j: f64,
    alphas: &[f64],
    start: Option<f64>,
    tol: f64,
) -> Result<Vec<TimeAverage>> {
    ensure(omega_k.is_finite() && omega_k >= 0.0, "omega_k", omega_k, "must be non-negative")?;
    for &a in alphas {
        ensure(a.is_finite() && a >= 0.0, "alpha", a, "must be non-negative")?;
    }
    let spec = NoiseSpec::white(1.0, omega0, omega_j)?;
    let start = start.unwrap_or_else(|| default_horizon(omega0, omega_k));
    ensure(start.is_finite() && start > 0.0, "horizon", start, "must be positive")?;
    let alpha_max = alphas.iter().copied().fold(0.0, f64::max);
    let mut profile = LongTimeProfile::new(&spec, omega_k, alpha_max)?;
    let base = profile.steps_for(start);
    Ok(alphas.iter().map(|&a| profile.converge(a, base, tol)).collect())
}

/// Outcome of a coherence-death threshold search.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AlphaCrit {
    Found {
        alpha_crit: f64,
        /// `(α, ⟨C⟩)` for every coarse scan point visited.
        scan: Vec<(f64, f64)>,
        /// `⟨C⟩` was non-increasing along the coarse scan.
        monotone: bool,
    },
    NotInRange {
        scan: Vec<(f64, f64)>,
    },
}

impl AlphaCrit {
    pub fn value(&self) -> Option<f64> {
        match self {
            AlphaCrit::Found { alpha_crit, .. } => Some(*alpha_crit),
            AlphaCrit::NotInRange { .. } => None,
        }
    }
}

/// Smallest α in `alpha_range` with converged `⟨C⟩ < 0.01`: coarse scan with
/// `step`, then bisection to [`ALPHA_RESOLUTION`].
pub fn alpha_crit_scan(
    omega0: f64,
    omega_k: f64,
    omega_j: f64,
    horizon: Option<f64>,
    alpha_range: (f64, f64),
    step: f64,
) -> Result<AlphaCrit> {
    let (lo, hi) = alpha_range;
    ensure(lo >= 0.0 && hi > lo, "alpha_range", hi - lo, "must be ascending and non-negative")?;
    ensure(step > 0.0, "step", step, "must be positive")?;
    ensure(omega_k.is_finite() && omega_k >= 0.0, "omega_k", omega_k, "must be non-negative")?;
    let spec = NoiseSpec::white(1.0, omega0, omega_j)?;
    let start = horizon.unwrap_or_else(|| default_horizon(omega0, omega_k));
    ensure(start.is_finite() && start > 0.0, "horizon", start, "must be positive")?;
    let mut profile = LongTimeProfile::new(&spec, omega_k, hi)?;
    let base = profile.steps_for(start);
    let mut avg = |alpha: f64| profile.converge(alpha, base, DEFAULT_AVG_TOL).value;

    let mut scan = Vec::new();
    let mut monotone = true;
    let mut prev: Option<(f64, f64)> = None;
    let n = ((hi - lo) / step).ceil() as usize;
    for i in 0..=n {
        let alpha = (lo + i as f64 * step).min(hi);
        let value = avg(alpha);
        scan.push((alpha, value));
        if let Some((_, pv)) = prev {
            monotone &= value <= pv * (1.0 + 1e-9);
        }
        if value < DEATH_THRESHOLD {
            let alpha_crit = match prev {
                None => alpha,
                Some((mut a, _)) => {
                    let mut b = alpha;
                    while b - a > ALPHA_RESOLUTION {
                        let mid = 0.5 * (a + b);
                        if avg(mid) < DEATH_THRESHOLD {
                            b = mid;
                        } else {
                            a = mid;
                        }
                    }
                    b
                }
            };
            return Ok(AlphaCrit::Found { alpha_crit, scan, monotone });
        }
        prev = Some((alpha, value));
    }
    Ok(AlphaCrit::NotInRange { scan })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn l1_examples() {
        assert_eq!(l1_coherence(&DensityMatrix::maximally_mixed()), 0.0);
        assert!((l1_coherence(&DensityMatrix::plus()) - 1.0).abs() < 1e-15);
        let rho = DensityMatrix::new(0.5, Complex64::new(0.3, 0.0), 0.5).unwrap();
        assert!((l1_coherence(&rho) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn coherence_starts_at_one() {
        let s = NoiseSpec::white(0.5, 0.2514, 50.0).unwrap();
        assert_eq!(coherence_z(&s, 0.0), 1.0);
        assert_eq!(coherence_xy(&s, 0.3, 0.0), 1.0);
        let t = std::f64::consts::FRAC_PI_2 / 0.3;
        assert!(coherence_xy(&s, 0.3, t) < 1e-15);
    }

    #[test]
    fn gamma_three_is_effectively_dead() {
        assert!(((-6.0f64).exp() - 0.0025).abs() < 1e-4);
    }

    #[test]
    fn revival_at_first_period() {
        let s = NoiseSpec::white(0.5, 0.2514, 50.0).unwrap();
        assert!(coherence_z(&s, 25.0) >= 0.98);
        assert!(coherence_xy(&s, 0.1257, 50.0) >= 0.98);
    }

    #[test]
    fn noiseless_average_is_two_over_pi() {
        let s = NoiseSpec::white(0.0, 0.03, 50.0).unwrap();
        let avg = converged_time_avg(&s, 0.1258, None, DEFAULT_AVG_TOL).unwrap();
        assert!(avg.converged);
        assert!((avg.value - 2.0 / std::f64::consts::PI).abs() < 1e-3, "{avg:?}");
    }

    #[test]
    fn strong_noise_kills_coherence() {
        // in the long-time limit ⟨C⟩ ≈ (2/π)/(α²π²), which is below 0.01 only past α ≈ 2.6
        let s = NoiseSpec::white(3.0, 0.03, 50.0).unwrap();
        let avg = converged_time_avg(&s, 0.1258, None, DEFAULT_AVG_TOL).unwrap();
        assert!(avg.value < DEATH_THRESHOLD, "{avg:?}");
    }

    #[test]
    fn converged_average_is_stable_under_doubling() {
        let s = NoiseSpec::white(1.0, 0.1, 50.0).unwrap();
        let avg = converged_time_avg(&s, 0.5, None, 1e-3).unwrap();
        assert!(avg.converged);
        let doubled = time_avg_coherence(&s, 0.5, 2.0 * avg.horizon, 1e-3).unwrap();
        assert!(relative(doubled.value, avg.value) <= 2e-3, "{avg:?} {doubled:?}");
    }

    #[test]
    fn alpha_crit_is_positive_and_reported() {
        let res = alpha_crit_scan(0.1, 0.13, 50.0, None, (0.0, 4.0), 0.25).unwrap();
        let scan = match &res {
            AlphaCrit::Found { scan, monotone, .. } => {
                assert!(*monotone);
                scan
            }
            other => panic!("expected a threshold, got {other:?}"),
        };
        assert!(scan[0].1 >= 0.6);
        let a = res.value().unwrap();
        assert!(a > 0.0 && a < 4.0);
    }

    #[test]
    fn alpha_crit_out_of_range() {
        let res = alpha_crit_scan(0.1, 0.13, 50.0, None, (0.0, 1.0), 0.5).unwrap();
        assert!(matches!(res, AlphaCrit::NotInRange { .. }));
        assert!(alpha_crit_scan(0.1, 0.13, 50.0, None, (1.0, 0.5), 0.1).is_err());
        assert!(alpha_crit_scan(0.1, 0.13, 50.0, None, (0.0, 1.0), 0.0).is_err());
    }
}
