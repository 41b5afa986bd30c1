use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::minima::{find_minima, relax, LocalMinimum, SeedGrid};
use super::PhasePotential;
use crate::{csv_float, GfqError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// `φ_p ∈ [-2π, 2π]` with 201 points.
    pub fn phi_p_default() -> Self {
        Self::new(-2.0 * PI, 2.0 * PI, 201)
    }

    /// `φ̃_m ∈ [-π, π]` with 201 points.
    pub fn phit_m_default() -> Self {
        Self::new(-PI, PI, 201)
    }
}

/// Sampled potential (`values[i][j]` at `φ_p[i]`, `φ̃_m[j]`) with its minima.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialLandscape {
    pub phi_p_axis: GridAxis,
    pub phit_m_axis: GridAxis,
    pub values: Vec<Vec<f64>>,
    pub minima: Vec<LocalMinimum>,
}

impl PotentialLandscape {
    pub fn grid_min(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(f64::INFINITY, |m, v| m.min(*v))
    }

    /// `phi_p,phitilde_m,V_over_EJ` rows, `φ_p` outer.
    pub fn to_csv(&self) -> String {
        let xs = self.phi_p_axis.values();
        let ys = self.phit_m_axis.values();
        let mut out = String::from("phi_p,phitilde_m,V_over_EJ\n");
        for (x, row) in xs.iter().zip(&self.values) {
            for (y, v) in ys.iter().zip(row) {
                let _ = writeln!(out, "{},{},{}", csv_float(*x), csv_float(*y), csv_float(*v));
            }
        }
        out
    }
}

/// Dense grid of the (relaxed) potential over the two axes, with minima annotated.
pub fn grid_scan<P: PhasePotential + ?Sized>(
    pot: &P,
    phi_p: GridAxis,
    phit_m: GridAxis,
) -> Result<PotentialLandscape> {
    if phi_p.points < 32 || phit_m.points < 32 {
        return Err(GfqError::Domain("grid resolution must be at least 32 per axis".into()));
    }
    if !(phi_p.max > phi_p.min && phit_m.max > phit_m.min) {
        return Err(GfqError::Domain("grid ranges must be increasing".into()));
    }
    let ys = phit_m.values();
    let values: Vec<Vec<f64>> = phi_p
        .values()
        .par_iter()
        .map(|&x| {
            // Warm-start the stiff coordinates along each row.
            let mut prev: Option<Vec<f64>> = None;
            ys.iter()
                .map(|&y| {
                    let mut pt = pot.lift(x, y);
                    if let Some(p) = &prev {
                        pt[2..].copy_from_slice(&p[2..]);
                    }
                    relax(pot, &mut pt);
                    let v = pot.value(&pt);
                    prev = Some(pt);
                    v
                })
                .collect()
        })
        .collect();
    let minima = find_minima(pot, &SeedGrid::default()).minima;
    Ok(PotentialLandscape {
        phi_p_axis: phi_p,
        phit_m_axis: phit_m,
        values,
        minima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_model::{CircuitParams, ReducedPotential};

    #[test]
    fn reference_grid() {
        let v = ReducedPotential::from_params(&CircuitParams::reference(), 0.0);
        let g = grid_scan(&v, GridAxis::phi_p_default(), GridAxis::phit_m_default()).unwrap();
        assert!((g.grid_min() + 2.854102).abs() < 1e-3);
        let n = g.values.len();
        for i in 0..n {
            for j in 0..g.values[i].len() {
                assert!((g.values[i][j] - g.values[n - 1 - i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tilted_grid_breaks_symmetry_monotonically() {
        let v = ReducedPotential::from_params(&CircuitParams::reference(), 0.05);
        let g = grid_scan(&v, GridAxis::new(-2.0 * PI, 2.0 * PI, 41), GridAxis::new(-PI, PI, 33)).unwrap();
        let n = g.values.len();
        let odd: Vec<f64> = (0..n).map(|i| g.values[i][16] - g.values[n - 1 - i][16]).collect();
        assert!(odd.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn coarse_grid_rejected() {
        let v = ReducedPotential::from_params(&CircuitParams::reference(), 0.0);
        assert!(grid_scan(&v, GridAxis::new(-1.0, 1.0, 16), GridAxis::phit_m_default()).is_err());
    }
}
