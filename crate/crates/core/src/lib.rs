//! Simulation of a current-biased gradiometric flux qubit (GFQ).
//!
//! All energies are in units of the α-loop junction energy `E_J`, phases are in
//! radians and fluxes in units of `Φ₀`. Bias currents enter through
//! `β = Φ₀ I / (2π E_J)`. Physical units appear only in [`observables`] and in the
//! resonator quantities of [`cqed`].
//!
//! The modules follow the model from the bottom up:
//!
//! - [`circuit_model`]: parameters, wave vectors and every effective potential.
//! - [`landscape`]: minima, the double-well cut, well tilt and contour grids.
//! - [`spectrum`]: tunnelling gap, the α parameter and the two-level Hamiltonian.
//! - [`observables`]: loop currents, the current-qubit coupling `g`, SI conversion.
//! - [`cqed`]: resonator modes, qubit-resonator and two-qubit Hamiltonians, dynamics.
//! - [`cli`]: configuration, commands and the reproduction scorecard behind the `gfq` binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit_model;
pub mod cli;
pub mod cqed;
mod error;
pub mod landscape;
pub mod observables;
pub mod spectrum;

pub use cqed::OperatorMatrix;
pub use error::{GfqError, Result};

/// Shortest round-trip decimal, with an exponent only for very large or small values.
pub(crate) fn csv_float(v: f64) -> String {
    match serde_json::Number::from_f64(v) {
        Some(n) => n.to_string(),
        None => format!("{v}"),
    }
}
