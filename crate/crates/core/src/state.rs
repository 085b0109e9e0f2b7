//! Single-qubit states: density matrices, Bloch vectors and reference bases.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;
const BLOCH_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Qubit density matrix, stored as its two populations and the upper
/// off-diagonal element; `ρ10 = conj(ρ01)` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho00: f64,
    rho11: f64,
    rho01: Complex64,
}

impl DensityMatrix {
    /// Checked constructor: unit trace within 1e-12 and positive semidefinite.
    pub fn new(rho00: f64, rho01: Complex64, rho11: f64) -> Result<Self> {
        let rho = Self::new_unchecked(rho00, rho01, rho11);
        ensure(
            (rho00 + rho11 - 1.0).abs() <= TRACE_TOL,
            "trace",
            rho00 + rho11,
            "density matrix must have unit trace",
        )?;
        let lo = rho.eigenvalues()[0];
        ensure(lo >= PSD_TOL, "min eigenvalue", lo, "density matrix must be positive semidefinite")?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(rho00: f64, rho01: Complex64, rho11: f64) -> Self {
        Self { rho00, rho11, rho01 }
    }

    /// `|ψ⟩⟨ψ|` for `ψ = (a, b)`, normalised.
    pub fn pure(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        ensure(norm > 0.0 && norm.is_finite(), "norm", norm, "state vector must be non-zero")?;
        let (a, b) = (a / norm, b / norm);
        Ok(Self::new_unchecked(a.norm_sqr(), a * b.conj(), b.norm_sqr()))
    }

    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(0.5, c(0.0, 0.0), 0.5)
    }

    pub fn ground() -> Self {
        Self::new_unchecked(1.0, c(0.0, 0.0), 0.0)
    }

    pub fn excited() -> Self {
        Self::new_unchecked(0.0, c(0.0, 0.0), 1.0)
    }

    /// `|+⟩⟨+|`.
    pub fn plus() -> Self {
        Self::new_unchecked(0.5, c(0.5, 0.0), 0.5)
    }

    pub fn from_bloch(r: &BlochVector) -> Result<Self> {
        ensure(
            r.norm() <= 1.0 + BLOCH_TOL,
            "|r|",
            r.norm(),
            "Bloch vector must lie in the unit ball",
        )?;
        Ok(Self::new_unchecked(
            0.5 * (1.0 + r.z),
            c(0.5 * r.x, -0.5 * r.y),
            0.5 * (1.0 - r.z),
        ))
    }

    pub fn from_matrix(m: &Matrix2<Complex64>) -> Result<Self> {
        let herm = (m[(1, 0)] - m[(0, 1)].conj()).norm();
        let imag = m[(0, 0)].im.abs().max(m[(1, 1)].im.abs());
        ensure(herm.max(imag) <= 1e-10, "hermiticity defect", herm.max(imag), "matrix must be Hermitian")?;
        Self::new(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re)
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }

    pub fn rho10(&self) -> Complex64 {
        self.rho01.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho00 + self.rho11
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            c(self.rho00, 0.0),
            self.rho01,
            self.rho01.conj(),
            c(self.rho11, 0.0),
        )
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues(self.rho00, self.rho01, self.rho11)
    }

    pub fn purity(&self) -> f64 {
        self.rho00 * self.rho00 + self.rho11 * self.rho11 + 2.0 * self.rho01.norm_sqr()
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector {
            x: 2.0 * self.rho01.re,
            y: -2.0 * self.rho01.im,
            z: self.rho00 - self.rho11,
        }
    }

    /// Conjugate by a 2×2 matrix: `U ρ U†`.
    pub fn conjugate_by(&self, u: &Matrix2<Complex64>) -> Self {
        let m = u * self.matrix() * u.adjoint();
        // re-symmetrise so ρ10 = conj(ρ01) survives rounding
        let off = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
        Self::new_unchecked(m[(0, 0)].re, off, m[(1, 1)].re)
    }

    /// Checks the three state invariants.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.rho00, self.rho01, self.rho11).map(|_| ())
    }

    pub(crate) fn with_coherence(&self, rho01: Complex64) -> Self {
        Self { rho01, ..*self }
    }
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}{:+.6}i], [{:.6}{:+.6}i, {:.6}]]",
            self.rho00, self.rho01.re, self.rho01.im, self.rho01.re, -self.rho01.im, self.rho11
        )
    }
}

/// Eigenvalues of the Hermitian matrix `[[a, b], [b*, d]]`, ascending.
pub(crate) fn hermitian_eigenvalues(a: f64, b: Complex64, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + b.norm_sqr()).sqrt();
    [mean - r, mean + r]
}

/// Bloch vector `r` with `ρ = (I + r·σ) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self { x, y, z };
        ensure(r.norm() <= 1.0 + BLOCH_TOL, "|r|", r.norm(), "Bloch vector must lie in the unit ball")?;
        Ok(r)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// l1 coherence with respect to the eigenbasis of `basis`:
    /// `|r| sqrt(1 − (r̂·k̂)²)`, the component of `r` transverse to the axis.
    pub fn coherence_about(&self, basis: Basis) -> f64 {
        let along = match basis {
            Basis::X => self.x,
            Basis::Y => self.y,
            Basis::Z => self.z,
        };
        (self.norm().powi(2) - along * along).max(0.0).sqrt()
    }
}

/// Reference basis: eigenbasis of σz, σx or σy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    /// Change-of-basis matrix from the computational basis; its columns are
    /// the basis eigenvectors (`|+⟩, |−⟩` for X and `|i+⟩, |i−⟩` for Y).
    pub fn change_of_basis(&self) -> Matrix2<Complex64> {
        let s = FRAC_1_SQRT_2;
        match self {
            Basis::Z => Matrix2::identity(),
            Basis::X => Matrix2::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)),
            Basis::Y => Matrix2::new(c(s, 0.0), c(s, 0.0), c(0.0, s), c(0.0, -s)),
        }
    }

    /// Maximally coherent input state `(|k0⟩ + e^{iφ}|k1⟩)/√2` written in the
    /// computational basis, where `|k0⟩, |k1⟩` are this basis' eigenvectors.
    pub fn coherent_state(&self, phi: f64) -> DensityMatrix {
        let u = self.change_of_basis();
        let e = Complex64::cis(phi);
        let a = (u[(0, 0)] + e * u[(0, 1)]) * FRAC_1_SQRT_2;
        let b = (u[(1, 0)] + e * u[(1, 1)]) * FRAC_1_SQRT_2;
        DensityMatrix::pure(a, b).expect("basis vectors are normalised")
    }

    /// Canonical input state for this basis: `φ = 0` for Z and the
    /// minimal-coherence phase `φ = π/2` for X and Y.
    pub fn canonical_state(&self) -> DensityMatrix {
        match self {
            Basis::Z => self.coherent_state(0.0),
            Basis::X | Basis::Y => self.coherent_state(std::f64::consts::FRAC_PI_2),
        }
    }

    /// Antipodal pair `(φ, φ + π)` around the canonical state.
    pub fn canonical_pair(&self) -> (DensityMatrix, DensityMatrix) {
        let phi = match self {
            Basis::Z => 0.0,
            Basis::X | Basis::Y => std::f64::consts::FRAC_PI_2,
        };
        (self.coherent_state(phi), self.coherent_state(phi + std::f64::consts::PI))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "z",
            Basis::X => "x",
            Basis::Y => "y",
        })
    }
}

impl std::str::FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" | "sigma_z" => Ok(Basis::Z),
            "x" | "sigma_x" => Ok(Basis::X),
            "y" | "sigma_y" => Ok(Basis::Y),
            other => Err(format!("unknown basis `{other}` (expected z, x or y)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_enforce_invariants() {
        assert!(DensityMatrix::new(0.6, c(0.0, 0.0), 0.5).is_err());
        assert!(DensityMatrix::new(0.5, c(0.6, 0.0), 0.5).is_err());
        assert!(DensityMatrix::new(0.5, c(0.5, 0.0), 0.5).is_ok());
        assert!(BlochVector::new(1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        let r = BlochVector::new(0.3, -0.4, 0.5).unwrap();
        let rho = DensityMatrix::from_bloch(&r).unwrap();
        let back = rho.bloch();
        assert!((back.x - 0.3).abs() < 1e-15 && (back.y + 0.4).abs() < 1e-15 && (back.z - 0.5).abs() < 1e-15);
    }

    #[test]
    fn canonical_states_match_hand_expansion() {
        // (|+⟩ + i|−⟩)/√2 = ((1+i), (1−i))/2  ⇒  ρ01 = i/2
        let x = Basis::X.canonical_state();
        assert!((x.rho01() - c(0.0, 0.5)).norm() < 1e-15);
        assert!((x.rho00() - 0.5).abs() < 1e-15);
        // (|i+⟩ + i|i−⟩)/√2 = ((1+i), (1+i))/2  ⇒  ρ01 = 1/2
        let y = Basis::Y.canonical_state();
        assert!((y.rho01() - c(0.5, 0.0)).norm() < 1e-15);
        let z = Basis::Z.canonical_state();
        assert!((z.rho01() - c(0.5, 0.0)).norm() < 1e-15 && (z.rho00() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn change_of_basis_is_unitary() {
        for b in Basis::ALL {
            let u = b.change_of_basis();
            let e = u.adjoint() * u - Matrix2::identity();
            assert!(e.norm() < 1e-15);
        }
    }

    #[test]
    fn transverse_coherence_of_axes() {
        let r = BlochVector::new(1.0, 0.0, 0.0).unwrap();
        assert!((r.coherence_about(Basis::Z) - 1.0).abs() < 1e-15);
        assert!(r.coherence_about(Basis::X).abs() < 1e-15);
        assert!((r.coherence_about(Basis::Y) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_parses() {
        assert_eq!("X".parse::<Basis>().unwrap(), Basis::X);
        assert!("w".parse::<Basis>().is_err());
    }
}
