//! Qubit pure-dephasing under engineered phase-modulation noise.
//!
//! The noise is a random-phase harmonic comb `β(t) = αω0 Σ j F(j) cos(jω0 t + ψj)`.
//! Its ensemble average gives the decoherence function `Γ(t)`, from which the
//! crate derives basis-dependent coherence, the BLP non-Markovianity measure,
//! closed-form design rules for revivals and their verification on traces.
//! A GRAPE optimizer synthesises the corresponding control pulses.

pub mod channel;
pub mod coherence;
pub mod decoherence;
pub mod error;
pub mod experiment;
pub mod grape;
pub mod grid;
mod harmonic;
pub mod noise;
pub mod nonmarkov;
pub mod revival;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use grid::{TimeGrid, Trace};
pub use noise::{NoiseRealization, NoiseSpec};
pub use state::{Basis, BlochVector, DensityMatrix};
