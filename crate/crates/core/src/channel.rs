//! Qubit evolution through the engineered dephasing channel.
//!
//! Under `H(t) = (ωk/2)σz + β(t)σz` each ensemble member evolves with
//! `U(t) = exp(−i ωk t σz / 2) exp(−i Φ(t) σz)`, so the populations are frozen
//! and the coherence picks up the phase `exp(−i(ωk t + 2Φ(t)))`. Averaging over
//! the random mode phases turns that phase into the decay `exp(−2Γ(t))`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decoherence::{gamma_exact, gamma_exact_on};
use crate::error::{ensure, Result};
use crate::grid::TimeGrid;
use crate::noise::{sample_member, NoiseRealization, NoiseSpec};
use crate::state::{Basis, BlochVector, DensityMatrix};

/// Qubit Hamiltonian parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingParams {
    omega_k: f64,
}

impl DephasingParams {
    pub fn new(omega_k: f64) -> Result<Self> {
        ensure(omega_k.is_finite() && omega_k >= 0.0, "omega_k", omega_k, "must be non-negative")?;
        Ok(Self { omega_k })
    }

    /// Zeeman angular frequency (rad/ms).
    pub fn omega_k(&self) -> f64 {
        self.omega_k
    }
}

/// Ensemble-averaged state at time `t`.
pub fn analytic_state(spec: &NoiseSpec, params: DephasingParams, rho0: &DensityMatrix, t: f64) -> DensityMatrix {
    let decay = (-2.0 * gamma_exact(spec, t)).exp();
    rotate_and_decay(rho0, params.omega_k * t, decay)
}

/// [`analytic_state`] on every grid point.
pub fn analytic_states_on(
    spec: &NoiseSpec,
    params: DephasingParams,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Vec<DensityMatrix> {
    gamma_exact_on(spec, grid)
        .into_iter()
        .zip(grid.times())
        .map(|(g, t)| rotate_and_decay(rho0, params.omega_k * t, (-2.0 * g).exp()))
        .collect()
}

fn rotate_and_decay(rho0: &DensityMatrix, angle: f64, decay: f64) -> DensityMatrix {
    rho0.with_coherence(rho0.rho01() * Complex64::cis(-angle) * decay)
}

/// Unitary of one ensemble member: `exp(−i ωk t σz / 2) exp(−i Φ σz)`.
pub fn member_unitary(omega_k: f64, phase: f64, t: f64) -> Matrix2<Complex64> {
    let a = 0.5 * omega_k * t + phase;
    Matrix2::new(
        Complex64::cis(-a),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::cis(a),
    )
}

/// State of a single member with noise `realization` at time `t`.
pub fn member_state(
    realization: &NoiseRealization,
    params: DephasingParams,
    rho0: &DensityMatrix,
    t: f64,
) -> DensityMatrix {
    let phase = realization.phase_integral(t);
    rho0.conjugate_by(&member_unitary(params.omega_k, phase, t))
}

/// Monte Carlo ensemble average over `members` noise realizations.
///
/// Member `m` uses the phase stream `(seed, m)`; members are accumulated in
/// index order so the result is bit-for-bit reproducible.
pub fn evolve_ensemble(
    spec: &NoiseSpec,
    params: DephasingParams,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    members: usize,
    seed: u64,
) -> Result<Vec<DensityMatrix>> {
    ensure(members >= 1, "members", members as f64, "ensemble needs at least one member")?;
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for m in 0..members {
        let phases = sample_member(spec, seed, m as u64).phase_integral_on(grid);
        for (a, phi) in acc.iter_mut().zip(phases) {
            *a += Complex64::cis(-2.0 * phi);
        }
    }
    let inv = 1.0 / members as f64;
    Ok(acc
        .into_iter()
        .zip(grid.times())
        .map(|(a, t)| rho0.with_coherence(rho0.rho01() * Complex64::cis(-params.omega_k * t) * a * inv))
        .collect())
}

/// Express `rho` in the eigenbasis of `basis`: `ρ_K = U† ρ U` with `U` from
/// [`Basis::change_of_basis`].
pub fn transform_basis(rho: &DensityMatrix, basis: Basis) -> DensityMatrix {
    match basis {
        Basis::Z => *rho,
        _ => rho.conjugate_by(&basis.change_of_basis().adjoint()),
    }
}

/// Dephasing channel on the Bloch ball: `(rx, ry, rz) ↦ ((1−p)rx, (1−p)ry, rz)`.
pub fn kraus_dephase(r: &BlochVector, p: f64) -> Result<BlochVector> {
    ensure((0.0..=1.0).contains(&p), "p", p, "dephasing probability must lie in [0, 1]")?;
    Ok(BlochVector {
        x: (1.0 - p) * r.x,
        y: (1.0 - p) * r.y,
        z: r.z,
    })
}

/// Kraus operators `√(1−p) I`, `√p |0⟩⟨0|`, `√p |1⟩⟨1|`.
pub fn kraus_operators(p: f64) -> Result<[Matrix2<Complex64>; 3]> {
    ensure((0.0..=1.0).contains(&p), "p", p, "dephasing probability must lie in [0, 1]")?;
    let z = Complex64::new(0.0, 0.0);
    let (a, b) = (Complex64::new((1.0 - p).sqrt(), 0.0), Complex64::new(p.sqrt(), 0.0));
    Ok([
        Matrix2::new(a, z, z, a),
        Matrix2::new(b, z, z, z),
        Matrix2::new(z, z, z, b),
    ])
}

/// Apply the channel through its Kraus decomposition `Σ M ρ M†`.
pub fn apply_kraus(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let ops = kraus_operators(p)?;
    let m = ops
        .iter()
        .fold(Matrix2::zeros(), |acc, k| acc + k * rho.matrix() * k.adjoint());
    DensityMatrix::from_matrix(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::sample_realization;

    fn params(w: f64) -> DephasingParams {
        DephasingParams::new(w).unwrap()
    }

    #[test]
    fn initial_state_is_unchanged() {
        let spec = NoiseSpec::white(0.5, 0.03, 50.0).unwrap();
        let rho0 = Basis::X.canonical_state();
        assert_eq!(analytic_state(&spec, params(1.0), &rho0, 0.0), rho0);
    }

    #[test]
    fn noiseless_evolution_is_a_rotation() {
        let spec = NoiseSpec::white(0.0, 0.03, 50.0).unwrap();
        let rho0 = DensityMatrix::plus();
        for t in [1.0, 13.0, 77.0] {
            let r = analytic_state(&spec, params(0.4), &rho0, t);
            assert!((r.rho01() - 0.5 * Complex64::cis(-0.4 * t)).norm() < 1e-15);
        }
    }

    #[test]
    fn plus_state_decays_with_gamma() {
        let spec = NoiseSpec::white(0.5, 0.03, 50.0).unwrap();
        let r = analytic_state(&spec, params(0.0), &DensityMatrix::plus(), 100.0);
        let want = 0.5 * (-2.0 * gamma_exact(&spec, 100.0)).exp();
        assert!((r.rho01().norm() - want).abs() < 1e-15);
    }

    #[test]
    fn single_noiseless_member_matches_analytic() {
        let spec = NoiseSpec::white(0.0, 0.03, 50.0).unwrap();
        let grid = TimeGrid::new(100.0, 101).unwrap();
        let rho0 = Basis::Y.canonical_state();
        let mc = evolve_ensemble(&spec, params(0.7), &rho0, &grid, 1, 3).unwrap();
        let an = analytic_states_on(&spec, params(0.7), &rho0, &grid);
        for (a, b) in mc.iter().zip(&an) {
            assert!((a.rho01() - b.rho01()).norm() < 1e-14);
            assert_eq!(a.rho00(), b.rho00());
        }
    }

    #[test]
    fn ensemble_is_deterministic() {
        let spec = NoiseSpec::white(0.5, 0.2514, 50.0).unwrap();
        let grid = TimeGrid::new(100.0, 201).unwrap();
        let rho0 = DensityMatrix::plus();
        let a = evolve_ensemble(&spec, params(1.0), &rho0, &grid, 20, 42).unwrap();
        let b = evolve_ensemble(&spec, params(1.0), &rho0, &grid, 20, 42).unwrap();
        assert_eq!(a, b);
        assert!(evolve_ensemble(&spec, params(1.0), &rho0, &grid, 0, 42).is_err());
    }

    #[test]
    fn member_phase_shortcut_matches_unitary_conjugation() {
        let spec = NoiseSpec::white(0.5, 0.05, 50.0).unwrap();
        let real = sample_realization(&spec, 9);
        let grid = TimeGrid::new(60.0, 61).unwrap();
        let rho0 = Basis::X.canonical_state();
        let mc = evolve_ensemble(&spec, params(0.3), &rho0, &TimeGrid::new(60.0, 61).unwrap(), 1, 9).unwrap();
        for (k, t) in grid.times().enumerate() {
            let direct = member_state(&real, params(0.3), &rho0, t);
            assert!((direct.rho01() - mc[k].rho01()).norm() < 1e-10);
            assert!((direct.rho00() - rho0.rho00()).abs() < 1e-15);
        }
    }

    #[test]
    fn transforms_fix_the_maximally_mixed_state() {
        let mixed = DensityMatrix::maximally_mixed();
        for b in Basis::ALL {
            let t = transform_basis(&mixed, b);
            assert!((t.rho00() - 0.5).abs() < 1e-15 && t.rho01().norm() < 1e-15);
        }
        let rho = Basis::Y.canonical_state();
        assert_eq!(transform_basis(&rho, Basis::Z), rho);
    }

    #[test]
    fn x_transform_is_an_involution() {
        let rho = DensityMatrix::new(0.7, Complex64::new(0.1, -0.2), 0.3).unwrap();
        let back = transform_basis(&transform_basis(&rho, Basis::X), Basis::X);
        assert!((back.rho01() - rho.rho01()).norm() < 1e-15);
        assert!((back.rho00() - rho.rho00()).abs() < 1e-15);
    }

    #[test]
    fn kraus_map_examples() {
        let r = BlochVector::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(kraus_dephase(&r, 0.0).unwrap(), r);
        let out = kraus_dephase(&BlochVector::new(0.3, 0.4, 0.5).unwrap(), 1.0).unwrap();
        assert_eq!((out.x, out.y, out.z), (0.0, 0.0, 0.5));
        let out = kraus_dephase(&r, 0.3).unwrap();
        assert!((out.x - 0.7).abs() < 1e-15);
        assert!((out.coherence_about(Basis::Z) - 0.7).abs() < 1e-15);
        assert!(kraus_dephase(&r, 1.2).is_err());
        assert!(kraus_dephase(&r, -0.1).is_err());
    }

    #[test]
    fn kraus_sum_agrees_with_bloch_map() {
        let r = BlochVector::new(0.2, -0.5, 0.6).unwrap();
        let rho = DensityMatrix::from_bloch(&r).unwrap();
        for p in [0.0, 0.25, 0.9, 1.0] {
            let via_ops = apply_kraus(&rho, p).unwrap().bloch();
            let via_map = kraus_dephase(&r, p).unwrap();
            assert!((via_ops.x - via_map.x).abs() < 1e-15);
            assert!((via_ops.y - via_map.y).abs() < 1e-15);
            assert!((via_ops.z - via_map.z).abs() < 1e-15);
        }
    }
}
