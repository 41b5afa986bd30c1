use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::minima::{find_minima, relaxed_value, LocalMinimum, SeedGrid, WellLabel};
use super::PhasePotential;
use crate::{GfqError, Result};

/// Samples of the potential along `φ̃_m = 0`, `φ_p ∈ [-2π, 2π]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleWellCut {
    pub phi_p: Vec<f64>,
    pub v: Vec<f64>,
    pub down: LocalMinimum,
    pub up: LocalMinimum,
    /// `V(φ_p = 0) - min(E_down, E_up)`.
    pub barrier: f64,
}

fn two_wells<P: PhasePotential + ?Sized>(pot: &P) -> Option<(LocalMinimum, LocalMinimum)> {
    let search = find_minima(pot, &SeedGrid::default());
    let downs: Vec<_> = search.minima.iter().filter(|m| m.label == WellLabel::Down).collect();
    let ups: Vec<_> = search.minima.iter().filter(|m| m.label == WellLabel::Up).collect();
    let lowest = |v: Vec<&LocalMinimum>| {
        v.into_iter()
            .min_by(|a, b| a.energy.total_cmp(&b.energy).then(a.phi_p.abs().total_cmp(&b.phi_p.abs())))
            .cloned()
    };
    Some((lowest(downs)?, lowest(ups)?))
}

pub fn double_well_cut<P: PhasePotential + ?Sized>(pot: &P, npoints: usize) -> Result<DoubleWellCut> {
    if npoints < 3 {
        return Err(GfqError::Domain("a cut needs at least 3 points".into()));
    }
    let argument = pot.double_well_argument();
    let (down, up) = two_wells(pot).ok_or(GfqError::NoDoubleWell { argument })?;
    let phi_p: Vec<f64> = (0..npoints)
        .map(|i| -2.0 * PI + 4.0 * PI * i as f64 / (npoints - 1) as f64)
        .collect();
    let v: Vec<f64> = phi_p.par_iter().map(|&p| relaxed_value(pot, p, 0.0)).collect();
    let barrier = relaxed_value(pot, 0.0, 0.0) - down.energy.min(up.energy);
    Ok(DoubleWellCut {
        phi_p,
        v,
        down,
        up,
        barrier,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tilt {
    /// `E(up) - E(down)`.
    pub eps: f64,
    pub down: LocalMinimum,
    pub up: LocalMinimum,
}

/// Well asymmetry of a biased potential, from the minima it actually has.
pub fn tilt<P: PhasePotential + ?Sized>(pot: &P) -> Result<Tilt> {
    let (down, up) = two_wells(pot).ok_or(GfqError::WellsMerged { beta: pot.bias() })?;
    Ok(Tilt {
        eps: up.energy - down.energy,
        down,
        up,
    })
}
