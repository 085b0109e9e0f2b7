//! Stochastic phase-modulation noise.
//!
//! The noise field is a harmonic comb of the base frequency with random phases:
//!
//! ```text
//! β(t) = α ω0 Σ_{j=1}^{J} j F(j) cos(ωj t + ψj),   ωj = j ω0,   F(j) = j^(p/2 − 1)
//! ```
//!
//! with `J = ⌊ωJ / ω0⌋` and `ψj` drawn i.i.d. uniform on `[0, 2π)`.
//! Frequencies are angular (rad/ms) and times are in ms throughout the crate.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::grid::TimeGrid;
use crate::harmonic::harmonic_sums;

/// Parameters of the phase-noise ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    alpha: f64,
    omega0: f64,
    omega_j: f64,
    p: f64,
    modes: usize,
}

impl NoiseSpec {
    pub fn new(alpha: f64, omega0: f64, omega_j: f64, p: f64) -> Result<Self> {
        ensure(alpha.is_finite() && alpha >= 0.0, "alpha", alpha, "must be non-negative")?;
        ensure(omega0.is_finite() && omega0 > 0.0, "omega0", omega0, "must be positive")?;
        ensure(
            omega_j.is_finite() && omega_j >= omega0,
            "omega_j",
            omega_j,
            "cutoff must be at least omega0",
        )?;
        ensure(p.is_finite(), "p", p, "must be finite")?;
        // the slack keeps exact ratios such as 0.3 / 0.1 from flooring one mode low
        let modes = (omega_j / omega0 + 1e-9).floor() as usize;
        Ok(Self {
            alpha,
            omega0,
            omega_j,
            p,
            modes: modes.max(1),
        })
    }

    /// White noise, `F(j) = 1/j`.
    pub fn white(alpha: f64, omega0: f64, omega_j: f64) -> Result<Self> {
        Self::new(alpha, omega0, omega_j, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_j(&self) -> f64 {
        self.omega_j
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// `J`, the number of comb modes.
    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn is_white(&self) -> bool {
        self.p == 0.0
    }

    /// Same comb with a different strength.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.omega0, self.omega_j, self.p)
    }

    /// `ωj = j ω0`, `j ≥ 1`.
    pub fn mode_frequency(&self, j: usize) -> f64 {
        j as f64 * self.omega0
    }

    /// `F(j) = j^(p/2 − 1)`.
    pub fn spectral_weight(&self, j: usize) -> f64 {
        if self.is_white() {
            1.0 / j as f64
        } else {
            (j as f64).powf(0.5 * self.p - 1.0)
        }
    }

    /// `j F(j) = j^(p/2)`; identically one for white noise.
    pub fn amplitude(&self, j: usize) -> f64 {
        if self.is_white() {
            1.0
        } else {
            (j as f64).powf(0.5 * self.p)
        }
    }

    pub(crate) fn modes(&self) -> impl Iterator<Item = usize> {
        1..=self.modes
    }
}

/// One draw of the mode phases `ψj`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRealization {
    spec: NoiseSpec,
    phases: Vec<f64>,
}

impl NoiseRealization {
    /// Build from explicit phases (reduced into `[0, 2π)`).
    pub fn from_phases(spec: NoiseSpec, phases: Vec<f64>) -> Result<Self> {
        ensure(
            phases.len() == spec.mode_count(),
            "phases",
            phases.len() as f64,
            "length must equal the mode count",
        )?;
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(Self { spec, phases })
    }

    pub fn spec(&self) -> &NoiseSpec {
        &self.spec
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Noise field `β(t)` in rad/ms.
    pub fn beta(&self, t: f64) -> f64 {
        let s = &self.spec;
        let sum: f64 = s
            .modes()
            .zip(&self.phases)
            .map(|(j, psi)| s.amplitude(j) * (s.mode_frequency(j) * t + psi).cos())
            .sum();
        s.alpha * s.omega0 * sum
    }

    /// Accumulated phase `Φ(t) = ∫0^t β`, from the closed-form antiderivative.
    pub fn phase_integral(&self, t: f64) -> f64 {
        let s = &self.spec;
        // sin(a + ψ) − sin ψ = 2 cos(ψ + a/2) sin(a/2), exact at t = 0
        let sum: f64 = s
            .modes()
            .zip(&self.phases)
            .map(|(j, psi)| {
                let half = 0.5 * s.mode_frequency(j) * t;
                s.spectral_weight(j) * 2.0 * (psi + half).cos() * half.sin()
            })
            .sum();
        s.alpha * sum
    }

    /// `Φ` on every grid point.
    pub fn phase_integral_on(&self, grid: &TimeGrid) -> Vec<f64> {
        let s = &self.spec;
        let coeffs: Vec<Complex64> = s
            .modes()
            .zip(&self.phases)
            .map(|(j, &psi)| Complex64::from_polar(s.alpha * s.spectral_weight(j), psi))
            .collect();
        let offset: f64 = coeffs.iter().map(|c| c.im).sum();
        let theta = s.omega0 * grid.dt();
        let mut out: Vec<f64> = harmonic_sums(&coeffs, 0.0, theta, grid.len())
            .into_iter()
            .map(|z| z.im - offset)
            .collect();
        out[0] = 0.0;
        out
    }
}

/// Phases for the realization keyed by `seed`.
pub fn sample_realization(spec: &NoiseSpec, seed: u64) -> NoiseRealization {
    sample_member(spec, seed, 0)
}

/// Phases for ensemble member `member` under master seed `seed`.
///
/// Each `(seed, member)` pair selects an independent ChaCha stream and mode
/// `j` reads the `j`-th word pair of that stream, so members can be drawn in
/// any order with identical results.
pub fn sample_member(spec: &NoiseSpec, seed: u64, member: u64) -> NoiseRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member);
    let phases = (0..spec.mode_count())
        .map(|_| wrap_phase(rng.random::<f64>() * TAU))
        .collect();
    NoiseRealization {
        spec: *spec,
        phases,
    }
}

fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}
