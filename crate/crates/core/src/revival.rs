//! Revival schedules, critical and resonant Zeeman frequencies, peak
//! detection on coherence traces and prediction-vs-trace verification.

use std::f64::consts::PI;

use serde::Serialize;

use crate::decoherence::{gamma_dot, PERIOD_CONSTANT};
use crate::error::{ensure, Error, Result};
use crate::grid::Trace;
use crate::noise::NoiseSpec;
use crate::state::Basis;

/// Peak height counted as a complete revival.
pub const FULL_REVIVAL_FLOOR: f64 = 0.98;
/// Default minimum prominence of a detected peak.
pub const DEFAULT_PROMINENCE: f64 = 0.02;
/// Default tolerance between a predicted and a detected revival time (ms).
pub const DEFAULT_TIME_TOL: f64 = 0.5;
/// Closeness to an integer for a frequency ratio to count as matched.
pub const INTEGER_RATIO_TOL: f64 = 5e-3;
/// Smallest `|cos(ωk t)|` accepted by [`extremum_residual`].
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RevivalKind {
    Full,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevivalPrediction {
    pub basis: Basis,
    pub period: f64,
    pub t_max: f64,
    pub times: Vec<f64>,
    pub kind: RevivalKind,
}

fn near_integer(x: f64) -> Option<u64> {
    let n = x.round();
    (n >= 1.0 && (x - n).abs() <= INTEGER_RATIO_TOL).then_some(n as u64)
}

fn schedule(omega0: f64, t_max: f64) -> Result<(f64, Vec<f64>, bool)> {
    ensure(omega0.is_finite() && omega0 > 0.0, "omega0", omega0, "must be positive")?;
    ensure(t_max.is_finite() && t_max > 0.0, "t_max", t_max, "must be positive")?;
    let period = PERIOD_CONSTANT / omega0;
    let ratio = omega0 * t_max / PERIOD_CONSTANT;
    let matched = near_integer(ratio);
    let count = matched.unwrap_or(ratio.floor() as u64);
    let times = (1..=count).map(|n| n as f64 * period).collect();
    Ok((period, times, matched.is_some()))
}

/// σz-basis revivals at the minima of the periodic `Γ`, `t = nT` with
/// `T = 6.285/ω0`. Full when `ω0 t_max / 6.285` is an integer.
pub fn predict_z_revivals(omega0: f64, t_max: f64) -> Result<RevivalPrediction> {
    let (period, times, full) = schedule(omega0, t_max)?;
    Ok(RevivalPrediction {
        basis: Basis::Z,
        period,
        t_max,
        times,
        kind: if full { RevivalKind::Full } else { RevivalKind::Partial },
    })
}

/// σx/σy-basis revivals on the same schedule. Full additionally requires
/// `ωk` to be an integer multiple of [`resonant_zeeman`].
pub fn predict_xy_revivals(basis: Basis, omega0: f64, omega_k: f64, t_max: f64) -> Result<RevivalPrediction> {
    ensure(basis != Basis::Z, "basis", 0.0, "σx or σy basis expected")?;
    ensure(omega_k.is_finite() && omega_k >= 0.0, "omega_k", omega_k, "must be non-negative")?;
    let (period, times, full) = schedule(omega0, t_max)?;
    let resonant = near_integer(omega_k / resonant_zeeman(omega0)).is_some();
    Ok(RevivalPrediction {
        basis,
        period,
        t_max,
        times,
        kind: if full && resonant { RevivalKind::Full } else { RevivalKind::Partial },
    })
}

/// `ωk^c = π / (2 t_max)`.
pub fn critical_zeeman(t_max: f64) -> f64 {
    PI / (2.0 * t_max)
}

/// `ωk^r = π ω0 / 6.285`.
pub fn resonant_zeeman(omega0: f64) -> f64 {
    PI * omega0 / PERIOD_CONSTANT
}

/// `ωk tan(ωk t) + 2Γ̇(t)`; zero at the interior extrema of the σx/σy coherence.
pub fn extremum_residual(spec: &NoiseSpec, omega_k: f64, t: f64) -> Result<f64> {
    let (s, c) = (omega_k * t).sin_cos();
    if c.abs() < POLE_GUARD {
        return Err(Error::Pole { t, cos_abs: c.abs() });
    }
    Ok(omega_k * s / c + 2.0 * gamma_dot(spec, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub index: usize,
    pub time: f64,
    pub value: f64,
    pub prominence: f64,
    /// The last sample, accepted because the trace rises into it.
    pub endpoint: bool,
}

/// Strict local maxima with `value ≥ floor` and `prominence ≥ min_prominence`.
///
/// `t = 0` is never a peak. The final sample is a peak when the trace rises
/// into it. Prominence is the height above the higher of the two bases, where
/// a base is the lowest value before the trace climbs above the peak or ends.
/// The window is truncated at `t_max`, so a right side that reaches the last
/// sample without climbing above the peak is ignored.
pub fn detect_revivals(trace: &Trace, floor: f64, min_prominence: f64) -> Vec<Peak> {
    let v = trace.values();
    let n = v.len();
    let mut peaks = Vec::new();
    if n < 2 {
        return peaks;
    }
    for k in 1..n {
        let rising = v[k] > v[k - 1];
        let is_peak = match k + 1 < n {
            true => rising && v[k] > v[k + 1],
            false => rising,
        };
        if !is_peak || v[k] < floor {
            continue;
        }
        let prominence = prominence(v, k);
        if prominence >= min_prominence {
            peaks.push(Peak {
                index: k,
                time: trace.time(k),
                value: v[k],
                prominence,
                endpoint: k + 1 == n,
            });
        }
    }
    peaks
}

fn prominence(v: &[f64], k: usize) -> f64 {
    let side = |range: &mut dyn Iterator<Item = usize>| -> (f64, bool) {
        let mut base = v[k];
        for i in range {
            if v[i] > v[k] {
                return (base, true);
            }
            base = base.min(v[i]);
        }
        (base, false)
    };
    let (left, _) = side(&mut (0..k).rev());
    let (right, right_closed) = side(&mut (k + 1..v.len()));
    let base = if right_closed { left.max(right) } else { left };
    v[k] - base
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevivalMatch {
    pub predicted: f64,
    pub peak: Option<Peak>,
    /// `|t_peak − t_predicted|` for the nearest detected peak.
    pub time_error: Option<f64>,
    /// Trace value at the grid point nearest the predicted time.
    pub value_at_prediction: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevivalReport {
    pub prediction: RevivalPrediction,
    pub peaks: Vec<Peak>,
    pub matches: Vec<RevivalMatch>,
    pub passed: bool,
    /// The trace is flat, so no peak can exist.
    pub degenerate: bool,
    /// A match relied on the rising-endpoint rule.
    pub endpoint_counted: bool,
}

impl RevivalReport {
    pub fn matched(&self) -> usize {
        self.matches.iter().filter(|m| m.passed).count()
    }
}

/// Matches every predicted time to the nearest detected peak. A time passes
/// when a peak lies within `time_tol` and, for full revivals, reaches
/// `value_floor`.
pub fn verify_prediction(prediction: &RevivalPrediction, trace: &Trace, time_tol: f64, value_floor: f64) -> RevivalReport {
    let degenerate = trace.max() - trace.min() <= 1e-12;
    let peaks = detect_revivals(trace, f64::NEG_INFINITY, DEFAULT_PROMINENCE);
    let full = prediction.kind == RevivalKind::Full;
    let matches: Vec<RevivalMatch> = prediction
        .times
        .iter()
        .map(|&t| {
            let peak = peaks
                .iter()
                .min_by(|a, b| (a.time - t).abs().total_cmp(&(b.time - t).abs()))
                .copied();
            let time_error = peak.map(|p| (p.time - t).abs());
            let passed = match peak {
                Some(p) => (p.time - t).abs() <= time_tol && (!full || p.value >= value_floor),
                None => false,
            };
            RevivalMatch {
                predicted: t,
                peak,
                time_error,
                value_at_prediction: trace.value_near(t),
                passed,
            }
        })
        .collect();
    let passed = match degenerate {
        true => !full,
        false => matches.iter().all(|m| m.passed),
    };
    let endpoint_counted = matches.iter().any(|m| m.passed && m.peak.is_some_and(|p| p.endpoint));
    RevivalReport {
        prediction: prediction.clone(),
        peaks,
        matches,
        passed,
        degenerate,
        endpoint_counted,
    }
}
