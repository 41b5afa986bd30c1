use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use super::PhasePotential;
use crate::{GfqError, Result};

const GRAD_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-6;
const MAX_ITER: usize = 400;
const MERGE_RADIUS: f64 = 0.5;
const MERGE_SAMPLES: usize = 32;
const MAX_STEP: f64 = 0.5;
/// `|sin(φ_p - center)|` below this counts as the centred single well.
const CENTER_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WellLabel {
    /// `φ_p < 0`
    Down,
    /// `φ_p > 0`
    Up,
    /// Single well at `φ_p = 0`.
    Center,
}

impl WellLabel {
    /// By the sign of `sin(φ_p - center)`, which is the sign of `φ_p` for `m = 0`
    /// and is unchanged by the lattice shifts.
    fn of(phi_p: f64, center: f64) -> Self {
        let s = (phi_p - center).sin();
        if s < -CENTER_TOL {
            WellLabel::Down
        } else if s > CENTER_TOL {
            WellLabel::Up
        } else {
            WellLabel::Center
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalMinimum {
    /// All coordinates; `[φ_p, φ̃_m]` or `[φ_p, φ̃_m, φ_m, φ̃_p]`.
    pub position: Vec<f64>,
    pub phi_p: f64,
    pub phit_m: f64,
    pub energy: f64,
    pub label: WellLabel,
    pub gradient_norm: f64,
    /// Smallest Hessian eigenvalue, positive at a true minimum.
    pub min_curvature: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Found,
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimaSearch {
    pub status: SearchStatus,
    pub minima: Vec<LocalMinimum>,
}

impl MinimaSearch {
    pub fn down(&self) -> Option<&LocalMinimum> {
        self.minima.iter().find(|m| m.label == WellLabel::Down)
    }

    pub fn up(&self) -> Option<&LocalMinimum> {
        self.minima.iter().rev().find(|m| m.label == WellLabel::Up)
    }
}

/// Regular `(φ_p, φ̃_m)` seed lattice, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeedGrid {
    pub phi_p: (f64, f64),
    pub phit_m: (f64, f64),
    pub n_phi_p: usize,
    pub n_phit_m: usize,
}

impl Default for SeedGrid {
    fn default() -> Self {
        Self {
            phi_p: (-2.0 * PI, 2.0 * PI),
            phit_m: (-PI, PI),
            n_phi_p: 17,
            n_phit_m: 17,
        }
    }
}

impl SeedGrid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let axis = |(a, b): (f64, f64), n: usize| -> Vec<f64> {
            if n <= 1 {
                return vec![0.5 * (a + b)];
            }
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
        };
        let xs = axis(self.phi_p, self.n_phi_p);
        let ys = axis(self.phit_m, self.n_phit_m);
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Modified Newton descent: Hessian eigenvalues replaced by `max(|λ|, δ)`, a
/// negative-curvature kick at stationary non-minima, Armijo backtracking and a step cap.
///
/// Returns the converged point, or `None` when the iteration budget runs out.
pub fn minimize<P: PhasePotential + ?Sized>(pot: &P, x0: &[f64]) -> Option<Vec<f64>> {
    let n = pot.dim();
    let mut x = x0.to_vec();
    let mut f = pot.value(&x);
    for _ in 0..MAX_ITER {
        let g = pot.gradient(&x);
        let gn = norm_inf(&g);
        let eig = SymmetricEigen::new(pot.hessian(&x));
        let lam_min = eig.eigenvalues.min();
        if gn <= GRAD_TOL && lam_min > 0.0 {
            return Some(x);
        }
        let gv = DVector::from_vec(g.clone());
        let mut p = DVector::zeros(n);
        for (k, lam) in eig.eigenvalues.iter().enumerate() {
            let q = eig.eigenvectors.column(k);
            let c = q.dot(&gv);
            p -= q * (c / lam.abs().max(1e-6));
        }
        if lam_min <= 0.0 && gn < 1e-6 {
            let k = eig.eigenvalues.imin();
            let q = eig.eigenvectors.column(k).into_owned();
            let sign = if q.dot(&gv) > 0.0 { -1.0 } else { 1.0 };
            p += q * (0.3 * sign);
        }
        let scale = norm_inf(p.as_slice());
        if scale > MAX_STEP {
            p *= MAX_STEP / scale;
        }
        let slope = gv.dot(&p);
        if gn < 1e-7 && lam_min > 0.0 {
            // Pure Newton in the quadratic basin; energy differences are below roundoff here.
            for i in 0..n {
                x[i] += p[i];
            }
            f = pot.value(&x);
            continue;
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-12 {
            let trial: Vec<f64> = (0..n).map(|i| x[i] + t * p[i]).collect();
            let ft = pot.value(&trial);
            if ft <= f + 1e-4 * t * slope.min(0.0) {
                x = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    None
}

/// Minimise over the coordinates beyond `(φ_p, φ̃_m)` with those two held fixed.
pub fn relax<P: PhasePotential + ?Sized>(pot: &P, x: &mut [f64]) {
    let n = pot.dim();
    if n <= 2 {
        return;
    }
    let m = n - 2;
    for _ in 0..100 {
        let g = pot.gradient(x);
        let gf = DVector::from_iterator(m, g[2..].iter().copied());
        if norm_inf(gf.as_slice()) <= 1e-12 {
            break;
        }
        let h = pot.hessian(x);
        let hf: DMatrix<f64> = h.view((2, 2), (m, m)).into_owned();
        let mut p = match hf.cholesky() {
            Some(c) => -c.solve(&gf),
            None => -gf * 1e-3,
        };
        let scale = norm_inf(p.as_slice());
        if scale > MAX_STEP {
            p *= MAX_STEP / scale;
        }
        for i in 0..m {
            x[2 + i] += p[i];
        }
    }
}

/// Potential at `(φ_p, φ̃_m)` with any stiff coordinates relaxed.
pub fn relaxed_value<P: PhasePotential + ?Sized>(pot: &P, phi_p: f64, phit_m: f64) -> f64 {
    let mut x = pot.lift(phi_p, phit_m);
    relax(pot, &mut x);
    pot.value(&x)
}

fn build_minimum<P: PhasePotential + ?Sized>(pot: &P, x: Vec<f64>) -> LocalMinimum {
    let g = pot.gradient(&x);
    let lam = SymmetricEigen::new(pot.hessian(&x)).eigenvalues.min();
    LocalMinimum {
        phi_p: x[0],
        phit_m: x[1],
        energy: pot.value(&x),
        label: WellLabel::of(x[0], pot.well_center()),
        gradient_norm: norm_inf(&g),
        min_curvature: lam,
        position: x,
    }
}

/// Largest coordinate difference after removing the nearest lattice shift, so that
/// images on opposite edges of the canonical window count as one point.
fn lattice_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut d: Vec<f64> = a.iter().zip(b).map(|(p, q)| q - p).collect();
    let k = (d[1] / PI).round();
    d[0] -= 2.0 * PI * k;
    d[1] -= PI * k;
    if d.len() == 4 {
        d[3] += PI * k;
    }
    let j = (d[0] / (4.0 * PI)).round();
    d[0] -= 4.0 * PI * j;
    if d.len() == 4 {
        d[3] += 2.0 * PI * j;
    }
    norm_inf(&d)
}

/// Points on a flat (e.g. quartic) bottom stop wherever the gradient test is met. Keep
/// only the lowest of any nearby group that no barrier separates.
fn merge_unseparated<P: PhasePotential + ?Sized>(pot: &P, mut xs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let energies: Vec<f64> = xs.iter().map(|x| pot.value(x)).collect();
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| {
        energies[a]
            .total_cmp(&energies[b])
            .then(xs[a][0].abs().total_cmp(&xs[b][0].abs()))
            .then(xs[a][0].total_cmp(&xs[b][0]))
            .then(xs[a][1].total_cmp(&xs[b][1]))
    });
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let merged = kept.iter().any(|&k| {
            let (a, b) = (&xs[k], &xs[i]);
            if a.iter().zip(b).any(|(p, q)| (p - q).abs() > MERGE_RADIUS) {
                return false;
            }
            let top = energies[k].max(energies[i]);
            let tol = 1e-12 * top.abs().max(1.0);
            (1..MERGE_SAMPLES).all(|s| {
                let t = s as f64 / MERGE_SAMPLES as f64;
                let p: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect();
                pot.value(&p) <= top + tol
            })
        });
        if !merged {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().rev().map(|i| xs.swap_remove(i)).collect()
}

/// Multi-start search over the seed lattice. Minima are mapped to their canonical
/// image, deduplicated at 1e-6 rad and sorted by `φ_p`.
pub fn find_minima<P: PhasePotential + ?Sized>(pot: &P, seeds: &SeedGrid) -> MinimaSearch {
    let found: Vec<Vec<f64>> = seeds
        .points()
        .par_iter()
        .filter_map(|&(p, t)| {
            let mut x = minimize(pot, &pot.lift(p, t))?;
            pot.canonicalize(&mut x);
            Some(x)
        })
        .collect();

    let mut unique: Vec<Vec<f64>> = Vec::new();
    for x in found {
        let dup = unique.iter().any(|u| lattice_distance(u, &x) <= DEDUP_TOL);
        if !dup {
            unique.push(x);
        }
    }
    let mut unique = merge_unseparated(pot, unique);
    unique.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let minima: Vec<LocalMinimum> = unique.into_iter().map(|x| build_minimum(pot, x)).collect();
    MinimaSearch {
        status: if minima.is_empty() {
            SearchStatus::Empty
        } else {
            SearchStatus::Found
        },
        minima,
    }
}

/// `-Ẽ_J / (4 E_J cos π(n + f_α))`. For odd `n` this is `Ẽ_J / (4 E_J cos π f_α)`.
pub fn double_well_argument(ej_ratio: f64, f_alpha: f64, n: i64) -> f64 {
    super::argument(ej_ratio, n as f64 + f_alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticMinima {
    /// Offset of the wells from their centre (`0` for even `m`).
    pub phi_p: f64,
    pub phit_m: f64,
    pub argument: f64,
}

/// Closed-form well positions of the reduced potential for `m + f2 - f1 = 0`:
/// `φ̃_m = 0`, `cos(φ_p/2) = Ẽ_J / (4 E_J cos π f_α)` for odd `n`.
/// For odd integer `m` pass `n + m`; the wells then sit at `π ± phi_p`.
pub fn analytic_minima(ej_ratio: f64, f_alpha: f64, n: i64) -> Result<AnalyticMinima> {
    let argument = double_well_argument(ej_ratio, f_alpha, n);
    if !(argument > 0.0 && argument < 1.0) {
        return Err(GfqError::NoDoubleWell { argument });
    }
    Ok(AnalyticMinima {
        phi_p: 2.0 * argument.acos(),
        phit_m: 0.0,
        argument,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_model::{CircuitParams, ReducedPotential, WindingNumbers};

    #[test]
    fn reference_reduced_minima() {
        let v = ReducedPotential::from_params(&CircuitParams::reference(), 0.0);
        let s = find_minima(&v, &SeedGrid::default());
        assert_eq!(s.minima.len(), 2, "{:?}", s.minima);
        let a = analytic_minima(2.0, 0.2, 1).unwrap().phi_p;
        assert!((a - 1.80911).abs() < 1e-5);
        assert!((s.minima[0].phi_p + a).abs() < 1e-8);
        assert!((s.minima[1].phi_p - a).abs() < 1e-8);
        assert_eq!(s.minima[0].label, WellLabel::Down);
        assert!((s.minima[0].energy - s.minima[1].energy).abs() < 1e-12);
    }

    #[test]
    fn even_n_single_centre() {
        let mut p = CircuitParams::reference();
        p.winding = WindingNumbers { n1: -1, n2: -1, n: 0 };
        let v = ReducedPotential::from_params(&p, 0.0);
        let s = find_minima(&v, &SeedGrid::default());
        assert_eq!(s.minima.len(), 1);
        assert_eq!(s.minima[0].label, WellLabel::Center);
    }

    #[test]
    fn analytic_cases() {
        assert!((analytic_minima(2.0, 0.25, 1).unwrap().phi_p - PI / 2.0).abs() < 1e-12);
        assert!(matches!(
            analytic_minima(4.0, 0.0, 1),
            Err(GfqError::NoDoubleWell { .. })
        ));
        assert!(analytic_minima(2.0, 0.2, 0).is_err());
    }

    #[test]
    fn odd_m_moves_wells_to_pi() {
        let mut p = CircuitParams::reference();
        p.winding = WindingNumbers::from_m_mprime(1, -1, 0).unwrap();
        let v = ReducedPotential::from_params(&p, 0.0);
        let s = find_minima(&v, &SeedGrid::default());
        let a = analytic_minima(2.0, 0.2, 1).unwrap().phi_p;
        assert_eq!(s.minima.len(), 2);
        assert!((s.down().unwrap().phi_p - (PI - a)).abs() < 1e-8);
        assert!((s.up().unwrap().phi_p - (PI + a)).abs() < 1e-8);

        p.winding = WindingNumbers::from_m_mprime(1, -1, 1).unwrap();
        let s = find_minima(&ReducedPotential::from_params(&p, 0.0), &SeedGrid::default());
        assert_eq!(s.minima.len(), 1);
        assert_eq!(s.minima[0].label, WellLabel::Center);
    }

    #[test]
    fn window_edge_images_merge() {
        let mut p = CircuitParams::reference();
        p.winding = WindingNumbers::from_m_mprime(2, -2, 0).unwrap();
        let s = find_minima(&ReducedPotential::from_params(&p, 0.0), &SeedGrid::default());
        assert_eq!(s.minima.len(), 1, "{:?}", s.minima);
    }
}
