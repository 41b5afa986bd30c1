//! Loop currents, the bias-current coupling `g` and conversion to SI units.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit_model::{optimal_mprime, CircuitParams, PhaseState, TransformedPhases, TransformedPotential, Bias};
use crate::landscape::{LocalMinimum, WellLabel};
use crate::spectrum::alpha_param;
use crate::{csv_float, GfqError, Result};

/// Sign convention attached to reported currents.
pub const CURRENT_SIGN_NOTE: &str = "I = -Phi0*kappa/2pi and I_i = -I_c sin(phi_i); both trapping \
currents share one reduced value per state and flip together; I_alpha keeps its sign across states, \
and reference comparisons use its magnitude";

/// CODATA flux quantum and Planck constant, plus the configured `L_eff` and `E_J/h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Wb
    pub phi0: f64,
    /// J s
    pub h: f64,
    /// H
    pub l_eff: f64,
    /// Hz
    pub ej_over_h: f64,
}

impl PhysicalConstants {
    pub const PHI0: f64 = 2.067833848e-15;
    pub const PLANCK: f64 = 6.62607015e-34;

    pub fn new(l_eff: f64, ej_over_h: f64) -> Result<Self> {
        if !(l_eff > 0.0 && ej_over_h > 0.0 && l_eff.is_finite() && ej_over_h.is_finite()) {
            return Err(GfqError::Config("L_eff and E_J/h must be positive".into()));
        }
        Ok(Self {
            phi0: Self::PHI0,
            h: Self::PLANCK,
            l_eff,
            ej_over_h,
        })
    }

    /// `L_eff = 15 pH`, `E_J/h = 200 GHz`.
    pub fn reference() -> Self {
        Self::new(15e-12, 200e9).expect("reference constants are valid")
    }

    /// `E_J` in joules.
    pub fn ej(&self) -> f64 {
        self.h * self.ej_over_h
    }

    /// `Φ₀² / (4 L_eff E_J)` implied by these constants (about 538 for the reference pair).
    pub fn implied_stiffness_loop(&self) -> f64 {
        self.phi0 * self.phi0 / (4.0 * self.l_eff * self.ej())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// Reduced `I L_eff / Φ₀` → amperes.
    Current,
    /// Units of `E_J` → joules.
    Energy,
    /// Units of `E_J` → hertz (`E/h`).
    Frequency,
}

pub fn to_si(value: f64, kind: Quantity, constants: Option<&PhysicalConstants>) -> Result<f64> {
    let c = constants.ok_or_else(|| GfqError::Config("physical constants are not configured".into()))?;
    Ok(match kind {
        Quantity::Current => value * c.phi0 / c.l_eff,
        Quantity::Energy => value * c.ej(),
        Quantity::Frequency => value * c.ej_over_h,
    })
}

/// Currents in the reduced form `I L_eff / Φ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoopCurrents {
    pub ip1: f64,
    pub ip2: f64,
    pub ialpha: f64,
    /// Junction currents of the α loop.
    pub i1: f64,
    pub i2: f64,
    pub mprime: i64,
    pub label: WellLabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoopCurrentsSi {
    pub ip1_na: f64,
    pub ip2_na: f64,
    pub ialpha_na: f64,
}

impl LoopCurrents {
    pub fn to_si(&self, constants: &PhysicalConstants) -> LoopCurrentsSi {
        let na = |v: f64| to_si(v, Quantity::Current, Some(constants)).expect("constants given") * 1e9;
        LoopCurrentsSi {
            ip1_na: na(self.ip1),
            ip2_na: na(self.ip2),
            ialpha_na: na(self.ialpha),
        }
    }
}

/// Trapping-branch and α-loop currents at a minimum.
///
/// The branch currents use the closed form with the outer-loop term
/// `[m' + f1 + f2 + (1 - L_M/(L_K+L_g)) f_α] / (L'_K + L'_g)`; the α-loop current is
/// `(I₁ - I₂)/2` with `I_i L_eff/Φ₀ = -(π/2) sin φ_i / stiffness_loop`.
/// A two-coordinate minimum is lifted onto the constraint surface.
pub fn loop_currents(params: &CircuitParams, minimum: &LocalMinimum, mprime: Option<i64>) -> Result<LoopCurrents> {
    let x = match minimum.position.len() {
        4 => [minimum.position[0], minimum.position[1], minimum.position[2], minimum.position[3]],
        2 => TransformedPotential::new(*params, Bias::None).lift(minimum.phi_p, minimum.phit_m),
        n => return Err(GfqError::Domain(format!("minimum has {n} coordinates, expected 2 or 4"))),
    };
    let phases = PhaseState::from(&TransformedPhases {
        phi_p: x[0],
        phit_m: x[1],
        phi_m: x[2],
        phit_p: x[3],
    });
    let ind = &params.inductance;
    let f = &params.flux;
    let mprime = mprime.unwrap_or_else(|| optimal_mprime(f.f1, f.f2, f.f_alpha, ind.lm_ratio()));

    let trapping = params.loop_target() - phases.loop_sum() / (2.0 * PI);
    let outer = mprime as f64 + f.f1 + f.f2 + (1.0 - ind.lm_ratio()) * f.f_alpha;
    let l_eff = ind.effective();
    let ip1 = -0.5 * trapping + 0.5 * outer * l_eff / ind.branch();
    let ip2 = -0.5 * trapping - 0.5 * outer * l_eff / ind.branch();

    let scale = -0.5 * PI / params.junctions.stiffness_loop;
    let i1 = scale * phases.phi1.sin();
    let i2 = scale * phases.phi2.sin();
    Ok(LoopCurrents {
        ip1,
        ip2,
        ialpha: 0.5 * (i1 - i2),
        i1,
        i2,
        mprime,
        label: minimum.label,
    })
}

/// `g = (Φ₀ I_b / 2π) α` for a given `Φ₀ I_b` (units of `E_J`).
pub fn coupling_strength(ej_ratio: f64, f_alpha: f64, phi0_ib: f64) -> Result<f64> {
    Ok(phi0_ib * alpha_param(ej_ratio, f_alpha)? / (2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GRow {
    pub ratio: f64,
    pub f_alpha: f64,
    pub g_over_phi0_ib: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GCurve {
    pub rows: Vec<GRow>,
    /// Points outside the double-well region, left out of `rows`.
    pub omitted: usize,
}

impl GCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ratio,f_alpha,g_over_phi0_Ib\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                csv_float(r.ratio),
                csv_float(r.f_alpha),
                csv_float(r.g_over_phi0_ib)
            ));
        }
        out
    }
}

/// `g / Φ₀I_b` over a grid of `Ẽ_J/E_J` and `f_α`, ratio-major.
pub fn g_curve(ratios: &[f64], f_alphas: &[f64]) -> GCurve {
    let mut rows = Vec::new();
    let mut omitted = 0;
    for &ratio in ratios {
        for &f_alpha in f_alphas {
            match coupling_strength(ratio, f_alpha, 1.0) {
                Ok(g) if alpha_param(ratio, f_alpha).map(|a| a > 0.0).unwrap_or(false) => rows.push(GRow {
                    ratio,
                    f_alpha,
                    g_over_phi0_ib: g,
                }),
                _ => omitted += 1,
            }
        }
    }
    GCurve { rows, omitted }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_reference_value() {
        let g = coupling_strength(2.0, 0.2, 1.0).unwrap();
        assert!((g - 0.28793).abs() < 1e-5);
        assert!(coupling_strength(4.0, 0.0, 1.0).unwrap().abs() < 1e-15);
        assert!(coupling_strength(5.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn g_curve_ratio_four_is_empty() {
        let fs: Vec<f64> = (0..10).map(|i| 0.04 * i as f64).collect();
        let c = g_curve(&[4.0], &fs);
        assert!(c.rows.is_empty());
        assert_eq!(c.omitted, 10);
    }

    #[test]
    fn si_conversion() {
        let c = PhysicalConstants::reference();
        let i = to_si(0.00123, Quantity::Current, Some(&c)).unwrap() * 1e9;
        assert!((i - 169.6).abs() < 0.1);
        let i = to_si(0.00022, Quantity::Current, Some(&c)).unwrap() * 1e9;
        assert!((i - 30.3).abs() < 0.1);
        assert_eq!(to_si(0.0, Quantity::Current, Some(&c)).unwrap(), 0.0);
        assert!(matches!(to_si(1.0, Quantity::Energy, None), Err(GfqError::Config(_))));
        assert!((c.implied_stiffness_loop() - 538.0).abs() < 1.0);
    }

    #[test]
    fn zero_state_has_zero_currents() {
        let mut p = CircuitParams::reference();
        p.flux = crate::circuit_model::FluxBias::new(0.0, 0.0, 0.0).unwrap();
        p.winding = crate::circuit_model::WindingNumbers { n1: 0, n2: 0, n: 0 };
        let m = LocalMinimum {
            position: vec![0.0; 4],
            phi_p: 0.0,
            phit_m: 0.0,
            energy: 0.0,
            label: WellLabel::Center,
            gradient_norm: 0.0,
            min_curvature: 1.0,
        };
        let c = loop_currents(&p, &m, None).unwrap();
        assert_eq!(c.mprime, 0);
        assert_eq!([c.ip1, c.ip2, c.ialpha], [0.0; 3]);
    }
}
