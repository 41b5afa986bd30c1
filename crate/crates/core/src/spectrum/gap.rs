use std::f64::consts::PI;

use serde::Serialize;

use super::eigen::{lowest_eigenpairs, BandedSymmetric, Eigenpairs};
use crate::landscape::{relaxed_value, PhasePotential};
use crate::{GfqError, Result};

/// Kinetic prefactors `T = -K ∂²` along `φ_p` and `φ̃_m` (units of `E_J`).
///
/// From the capacitive Lagrangian with the loop constraint eliminating `φ̃_p`
/// (`φ̃̇_p = -φ̇_p/2`) and `φ_m` frozen: masses `2(C + C̃/4)` and `2C̃` in units of
/// `(Φ₀/2π)²`, with `C̃/C = Ẽ_J/E_J` and `E_C = e²/2C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MassModel {
    pub kinetic_phi_p: f64,
    pub kinetic_phit_m: f64,
}

impl MassModel {
    pub fn capacitive(ec: f64, ej_ratio: f64) -> Result<Self> {
        if !(ec > 0.0 && ej_ratio > 0.0) {
            return Err(GfqError::Domain("E_C and Ẽ_J/E_J must be positive".into()));
        }
        Ok(Self {
            kinetic_phi_p: 2.0 * ec / (1.0 + 0.25 * ej_ratio),
            kinetic_phit_m: 2.0 * ec / ej_ratio,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    HardWall,
}

/// One finite-difference axis; the two end points carry the hard walls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchrodingerGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// `K` in `-K ∂²`.
    pub kinetic: f64,
    pub boundary: Boundary,
}

impl SchrodingerGrid {
    pub fn new(min: f64, max: f64, points: usize, kinetic: f64) -> Result<Self> {
        if points < 101 {
            return Err(GfqError::Domain("a Schrödinger grid needs at least 101 points".into()));
        }
        if !(max > min) || !(kinetic > 0.0) {
            return Err(GfqError::Domain("grid range must be increasing and K positive".into()));
        }
        Ok(Self {
            min,
            max,
            points,
            kinetic,
            boundary: Boundary::HardWall,
        })
    }

    /// `φ_p ∈ [-2π, 2π]`.
    pub fn phi_p(mass: &MassModel, points: usize) -> Result<Self> {
        Self::new(-2.0 * PI, 2.0 * PI, points, mass.kinetic_phi_p)
    }

    /// `φ̃_m ∈ [-π, π]`.
    pub fn phit_m(mass: &MassModel, points: usize) -> Result<Self> {
        Self::new(-PI, PI, points, mass.kinetic_phit_m)
    }

    fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    /// Interior coordinates (walls excluded).
    fn interior(&self) -> Vec<f64> {
        let h = self.step();
        (1..self.points - 1).map(|i| self.min + h * i as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapResult {
    pub t_q: f64,
    pub delta: f64,
    /// Lowest four levels (units of `E_J`).
    pub levels: Vec<f64>,
    /// `E₂ - E₁ ≥ 3Δ`.
    pub isolated: bool,
    pub warning: Option<String>,
    /// Largest ground-doublet amplitude next to a wall, relative to the maximum.
    pub wall_amplitude: f64,
}

impl GapResult {
    fn from_levels(eig: &Eigenpairs, wall_amplitude: f64) -> Self {
        let e = &eig.values;
        let delta = e[1] - e[0];
        let isolated = e[2] - e[1] >= 3.0 * delta;
        let mut warnings = Vec::new();
        if !isolated {
            warnings.push(format!(
                "lowest doublet not isolated: E2 - E1 = {:.3e} < 3 Delta = {:.3e}",
                e[2] - e[1],
                3.0 * delta
            ));
        }
        if wall_amplitude > 1e-6 {
            warnings.push(format!("wavefunction reaches the walls (relative amplitude {wall_amplitude:.1e})"));
        }
        GapResult {
            t_q: 0.5 * delta,
            delta,
            levels: e.clone(),
            isolated,
            warning: if warnings.is_empty() {
                None
            } else {
                Some(warnings.join("; "))
            },
            wall_amplitude,
        }
    }
}

fn relative_wall_amplitude(vectors: &[Vec<f64>], on_wall: impl Fn(usize) -> bool) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let wall = v
                .iter()
                .enumerate()
                .filter(|(i, _)| on_wall(*i))
                .fold(0.0f64, |m, (_, x)| m.max(x.abs()));
            wall / max
        })
        .fold(0.0, f64::max)
}

/// Lowest `k` levels of `-K ∂² + V(x)` on a 1D hard-wall grid.
pub fn solve_1d(v: impl Fn(f64) -> f64, grid: &SchrodingerGrid, k: usize) -> Result<Eigenpairs> {
    let xs = grid.interior();
    let n = xs.len();
    let off = -grid.kinetic / grid.step().powi(2);
    let mut h = BandedSymmetric::zeros(n, 1);
    let mut vmin = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let vi = v(x);
        vmin = vmin.min(vi);
        h.set(i, i, -2.0 * off + vi);
        if i > 0 {
            h.set(i, i - 1, off);
        }
    }
    lowest_eigenpairs(&h, k, vmin - 0.05)
}

/// Lowest `k` levels of `-K_x ∂²_x - K_y ∂²_y + V(x, y)` (5-point Laplacian, hard walls).
/// Eigenvector index is `i_x * n_y + i_y` over interior points.
pub fn solve_2d(
    v: impl Fn(f64, f64) -> f64 + Sync,
    gx: &SchrodingerGrid,
    gy: &SchrodingerGrid,
    k: usize,
) -> Result<Eigenpairs> {
    let xs = gx.interior();
    let ys = gy.interior();
    let (nx, ny) = (xs.len(), ys.len());
    let ox = -gx.kinetic / gx.step().powi(2);
    let oy = -gy.kinetic / gy.step().powi(2);
    let mut h = BandedSymmetric::zeros(nx * ny, ny);
    let mut vmin = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let idx = i * ny + j;
            let vij = v(x, y);
            vmin = vmin.min(vij);
            h.set(idx, idx, -2.0 * (ox + oy) + vij);
            if j > 0 {
                h.set(idx, idx - 1, oy);
            }
            if i > 0 {
                h.set(idx, idx - ny, ox);
            }
        }
    }
    lowest_eigenpairs(&h, k, vmin - 0.05)
}

/// Splitting of the lowest doublet along the `φ̃_m = 0` cut.
pub fn tunneling_gap_1d<P: PhasePotential + ?Sized>(pot: &P, grid: &SchrodingerGrid) -> Result<GapResult> {
    let eig = solve_1d(|x| relaxed_value(pot, x, 0.0), grid, 4)?;
    let n = grid.points - 2;
    let wall = relative_wall_amplitude(&eig.vectors[..2], |i| i == 0 || i == n - 1);
    Ok(GapResult::from_levels(&eig, wall))
}

/// Splitting of the lowest doublet of the two-dimensional `(φ_p, φ̃_m)` problem.
pub fn splitting_2d<P: PhasePotential + ?Sized>(
    pot: &P,
    grid_p: &SchrodingerGrid,
    grid_t: &SchrodingerGrid,
) -> Result<GapResult> {
    let eig = solve_2d(|x, y| relaxed_value(pot, x, y), grid_p, grid_t, 4)?;
    let (nx, ny) = (grid_p.points - 2, grid_t.points - 2);
    let wall = relative_wall_amplitude(&eig.vectors[..2], |idx| {
        let (i, j) = (idx / ny, idx % ny);
        i == 0 || i == nx - 1 || j == 0 || j == ny - 1
    });
    Ok(GapResult::from_levels(&eig, wall))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_1d_levels() {
        // -K ψ'' + ½kx² ψ: ω = √(2Kk), levels ω(n + ½).
        let (kin, k) = (0.02, 1.0);
        let g = SchrodingerGrid::new(-3.0, 3.0, 2001, kin).unwrap();
        let e = solve_1d(|x| 0.5 * k * x * x, &g, 4).unwrap();
        let w = (2.0 * kin * k).sqrt();
        for (n, v) in e.values.iter().enumerate() {
            assert!((v - w * (n as f64 + 0.5)).abs() / (w * (n as f64 + 0.5)) < 1e-3);
        }
    }

    #[test]
    fn small_grids_rejected() {
        assert!(SchrodingerGrid::new(-1.0, 1.0, 50, 1.0).is_err());
    }
}
