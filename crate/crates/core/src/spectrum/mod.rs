//! Tunnelling gap, the α parameter and the two-level Hamiltonian of the GFQ.

pub mod eigen;
mod gap;

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit_model::{CircuitParams, ReducedPotential};
use crate::cqed::{BasisFactor, OperatorMatrix};
use crate::landscape::{analytic_minima, tilt};
use crate::{GfqError, Result};

pub use gap::{
    solve_1d, solve_2d, splitting_2d, tunneling_gap_1d, Boundary, GapResult, MassModel,
    SchrodingerGrid,
};

/// `α = 2 arccos(Ẽ_J / (4 E_J cos π f_α))`, the well position `|φ_p|` for odd `n`.
/// At the existence boundary (argument exactly 1) it returns 0.
pub fn alpha_param(ej_ratio: f64, f_alpha: f64) -> Result<f64> {
    let c = (std::f64::consts::PI * f_alpha).cos();
    let argument = ej_ratio / (4.0 * c);
    if !(c > 0.0) || !(argument > 0.0 && argument <= 1.0) {
        return Err(GfqError::NoDoubleWell { argument });
    }
    Ok(2.0 * argument.acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QubitSpectrum {
    pub e_down: f64,
    pub e_up: f64,
    pub t_q: f64,
    pub delta: f64,
    pub alpha: f64,
    /// `E_up - E_down`.
    pub eps: f64,
}

impl QubitSpectrum {
    pub fn new(e_down: f64, e_up: f64, t_q: f64, alpha: f64) -> Result<Self> {
        if !(t_q >= 0.0) {
            return Err(GfqError::Domain("tunnelling amplitude must be non-negative".into()));
        }
        Ok(Self {
            e_down,
            e_up,
            t_q,
            delta: 2.0 * t_q,
            alpha,
            eps: e_up - e_down,
        })
    }

    /// Well energies, gap and α of the reduced potential at zero bias, with the gap
    /// from the 1D cut under the capacitive mass model.
    pub fn compute(params: &CircuitParams, points: usize) -> Result<Self> {
        let v = ReducedPotential::from_params(params, 0.0);
        let wells = tilt(&v)?;
        let mass = MassModel::capacitive(params.junctions.ec, params.junctions.ej_ratio)?;
        let gap = tunneling_gap_1d(&v, &SchrodingerGrid::phi_p(&mass, points)?)?;
        let alpha = match analytic_minima(params.junctions.ej_ratio, params.flux.f_alpha, params.winding.n) {
            Ok(a) => a.phi_p,
            Err(_) => 0.5 * (wells.up.phi_p - wells.down.phi_p),
        };
        Self::new(wells.down.energy, wells.up.energy, gap.t_q, alpha)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Two-level Hamiltonian in the well basis `[↓, ↑]`:
/// `E_↓|↓⟩⟨↓| + E_↑|↑⟩⟨↑| - t_q σ_x - β₀ α (|↓⟩⟨↓| - |↑⟩⟨↑|)`.
pub fn tight_binding_h(spec: &QubitSpectrum, beta0: f64) -> OperatorMatrix {
    let tilt = beta0 * spec.alpha;
    let data = DMatrix::from_row_slice(
        2,
        2,
        &[
            c(spec.e_down - tilt),
            c(-spec.t_q),
            c(-spec.t_q),
            c(spec.e_up + tilt),
        ],
    );
    OperatorMatrix::new(data, vec![BasisFactor::wells("qubit")]).expect("2x2 well basis")
}

/// Unitary from the well basis to `|0⟩ = (|↓⟩+|↑⟩)/√2`, `|1⟩ = (|↓⟩-|↑⟩)/√2`.
pub fn well_to_qubit() -> DMatrix<Complex64> {
    let s = c(FRAC_1_SQRT_2);
    DMatrix::from_row_slice(2, 2, &[s, s, s, -s])
}

/// Re-express a well-basis qubit operator in the `{|0⟩, |1⟩}` basis.
pub fn to_qubit_basis(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    if h.dim() != 2 {
        return Err(GfqError::Domain("expected a single-qubit operator".into()));
    }
    let u = well_to_qubit();
    OperatorMatrix::new(u.adjoint() * &h.data * u, vec![BasisFactor::qubit("qubit")])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn alpha_values() {
        assert!((alpha_param(2.0, 0.2).unwrap() - 1.80911).abs() < 1e-5);
        assert_eq!(alpha_param(4.0, 0.0).unwrap(), 0.0);
        assert!((alpha_param(2.0, 0.25).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!(alpha_param(4.5, 0.0).is_err());
        assert!(alpha_param(1.0, 0.5).is_err());
    }

    #[test]
    fn tight_binding_gap_and_basis_change() {
        let s = QubitSpectrum::new(-2.85, -2.85, 1e-3, 1.8).unwrap();
        let h = tight_binding_h(&s, 0.0);
        assert!(h.is_hermitian());
        let e = h.eigenvalues();
        assert!((e[1] - e[0] - s.delta).abs() < 1e-15);
        let q = to_qubit_basis(&h).unwrap();
        assert!(q.data[(0, 1)].norm() < 1e-15);
        assert!((q.data[(1, 1)].re - q.data[(0, 0)].re - s.delta).abs() < 1e-15);
    }

    #[test]
    fn sine_drive_maps_to_sigma_x() {
        // I₀ = -I_b sin ωt, so β₀ = -β_b sin ωt and the drive reads g sin ωt σ_x.
        let s = QubitSpectrum::new(0.0, 0.0, 0.0, 1.8).unwrap();
        let (beta_b, phase) = (0.01, 0.7f64);
        let q = to_qubit_basis(&tight_binding_h(&s, -beta_b * phase.sin())).unwrap();
        let g = beta_b * s.alpha;
        assert!((q.data[(0, 1)].re - g * phase.sin()).abs() < 1e-15);
        assert!(q.data[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn bare_wells_without_tunnelling() {
        let s = QubitSpectrum::new(0.0, 0.0, 0.0, 1.8).unwrap();
        let (_, vecs) = tight_binding_h(&s, 0.2).eigh();
        assert!((vecs[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }
}
