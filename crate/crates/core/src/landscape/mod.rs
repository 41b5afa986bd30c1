//! Minima, double-well cut, well tilt and contour grids of the GFQ potentials.

mod cut;
mod grid;
mod minima;

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::circuit_model::{ReducedPotential, TransformedPotential};

pub use cut::{double_well_cut, tilt, DoubleWellCut, Tilt};
pub use grid::{grid_scan, GridAxis, PotentialLandscape};
pub use minima::{
    analytic_minima, double_well_argument, find_minima, minimize, relax, relaxed_value,
    AnalyticMinima, LocalMinimum, MinimaSearch, SearchStatus, SeedGrid, WellLabel,
};

/// A potential over phase coordinates whose first two entries are `(φ_p, φ̃_m)`.
///
/// Any further coordinates are stiff ones (`φ_m`, `φ̃_p` for the full potential) that
/// grids and cuts relax at fixed `(φ_p, φ̃_m)`.
pub trait PhasePotential: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn hessian(&self, x: &[f64]) -> DMatrix<f64>;
    /// Full coordinate vector above a `(φ_p, φ̃_m)` point.
    fn lift(&self, phi_p: f64, phit_m: f64) -> Vec<f64>;
    /// Move `x` to its symmetry image with `φ̃_m ∈ [-π/2, π/2)` and `φ_p ∈ [-2π, 2π)`.
    fn canonicalize(&self, x: &mut [f64]);
    /// `-Ẽ_J / (4 E_J cos π(m + n + f_α))`; two wells exist when it lies in `(0, 1)`.
    fn double_well_argument(&self) -> f64;
    /// `π m`: the point the two wells sit symmetrically about (odd `m` moves it to `π`).
    fn well_center(&self) -> f64;
    /// The bias strength the potential was built with (for error reports).
    fn bias(&self) -> f64;
}

/// Shift by `k` times the lattice vector `(2π, π, [0, -π])`, then by multiples of
/// `(4π, 0, [0, -2π])`. Both leave the potentials invariant at zero bias.
fn canonicalize_lattice(x: &mut [f64]) {
    let k = ((x[1] + 0.5 * PI) / PI).floor();
    x[0] -= 2.0 * PI * k;
    x[1] -= PI * k;
    if x.len() == 4 {
        x[3] += PI * k;
    }
    let j = ((x[0] + 2.0 * PI) / (4.0 * PI)).floor();
    x[0] -= 4.0 * PI * j;
    if x.len() == 4 {
        x[3] += 2.0 * PI * j;
    }
}

fn argument(ej_ratio: f64, alpha_target: f64) -> f64 {
    -ej_ratio / (4.0 * (PI * alpha_target).cos())
}

impl PhasePotential for ReducedPotential {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, x: &[f64]) -> f64 {
        ReducedPotential::value(self, x[0], x[1])
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        ReducedPotential::gradient(self, x[0], x[1]).to_vec()
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let h = ReducedPotential::hessian(self, x[0], x[1]);
        DMatrix::from_fn(2, 2, |i, j| h[i][j])
    }

    fn lift(&self, phi_p: f64, phit_m: f64) -> Vec<f64> {
        vec![phi_p, phit_m]
    }

    fn canonicalize(&self, x: &mut [f64]) {
        canonicalize_lattice(x);
    }

    fn double_well_argument(&self) -> f64 {
        argument(self.ej_ratio, self.alpha_target + self.loop_target.round())
    }

    fn well_center(&self) -> f64 {
        PI * self.loop_target.round()
    }

    fn bias(&self) -> f64 {
        self.beta0
    }
}

impl PhasePotential for TransformedPotential {
    fn dim(&self) -> usize {
        4
    }

    fn value(&self, x: &[f64]) -> f64 {
        TransformedPotential::value(self, &[x[0], x[1], x[2], x[3]])
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        TransformedPotential::gradient(self, &[x[0], x[1], x[2], x[3]]).to_vec()
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let h = TransformedPotential::hessian(self, &[x[0], x[1], x[2], x[3]]);
        DMatrix::from_fn(4, 4, |i, j| h[i][j])
    }

    fn lift(&self, phi_p: f64, phit_m: f64) -> Vec<f64> {
        TransformedPotential::lift(self, phi_p, phit_m).to_vec()
    }

    fn canonicalize(&self, x: &mut [f64]) {
        canonicalize_lattice(x);
    }

    fn double_well_argument(&self) -> f64 {
        let p = &self.params;
        argument(p.junctions.ej_ratio, p.alpha_target() + p.loop_target().round())
    }

    fn well_center(&self) -> f64 {
        PI * self.params.loop_target().round()
    }

    fn bias(&self) -> f64 {
        match self.bias {
            crate::circuit_model::Bias::None => 0.0,
            crate::circuit_model::Bias::Current(b) | crate::circuit_model::Bias::Branch(b) => b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_model::{Bias, CircuitParams};

    #[test]
    fn canonical_images_share_energy() {
        let p = CircuitParams::reference();
        let t = TransformedPotential::new(p, Bias::None);
        let mut x = vec![1.3 + 2.0 * PI, 0.2 + PI, 3.5, -0.4 - PI];
        let before = PhasePotential::value(&t, &x);
        t.canonicalize(&mut x);
        assert!((x[0] - 1.3).abs() < 1e-12 && (x[1] - 0.2).abs() < 1e-12);
        assert!((PhasePotential::value(&t, &x) - before).abs() < 1e-9);

        let r = ReducedPotential::from_params(&p, 0.0);
        let mut y = vec![-1.0 - 4.0 * PI, -0.3 + 2.0 * PI];
        let before = PhasePotential::value(&r, &y);
        r.canonicalize(&mut y);
        assert!((y[0] + 1.0).abs() < 1e-12 && (y[1] + 0.3).abs() < 1e-12);
        assert!((PhasePotential::value(&r, &y) - before).abs() < 1e-12);
    }

    #[test]
    fn reference_argument() {
        let r = ReducedPotential::from_params(&CircuitParams::reference(), 0.0);
        assert!((r.double_well_argument() - 0.618034).abs() < 1e-6);
    }
}
