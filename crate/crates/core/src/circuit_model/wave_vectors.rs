use std::f64::consts::PI;

use serde::Serialize;

use super::params::{FluxBias, InductanceSet, PhaseState, WindingNumbers};
use crate::{GfqError, Result};

/// Which node the bias line is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BiasScheme {
    /// `I₀` through the α loop: `k = k'₁ + k'₂`, `k + k₀ = k₁ + k₂`.
    AlphaLoop,
    /// `I'₀` into the branch node: `k'₁ + k'₂ + k'₀ = k`, `k = k₁ + k₂`.
    Branch,
}

/// Cooper-pair wave vectors stored as phase-gradient products `k·length` (radians).
///
/// `k1`, `k2` are `k₁l`, `k₂l`; `kp1`, `kp2` are `k'₁l'`, `k'₂l'`; `k` is `k·l̃`.
/// Because every wire shares cross-section and carrier density, `l ∝ L_K`, so
/// `κ = k·length / L_K(wire)` is the same current-like variable on every wire:
/// `I = -Φ₀ κ / 2π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WaveVectorSolution {
    pub k1: f64,
    pub k2: f64,
    pub kp1: f64,
    pub kp2: f64,
    pub k: f64,
    pub scheme: BiasScheme,
    /// Reduced bias wave vector `κ₀` (or `κ'₀`), in units of `1/L_K`.
    pub bias_kappa: f64,
}

impl WaveVectorSolution {
    /// Current-like `κ` values `[κ₁, κ₂, κ'₁, κ'₂, κ]`.
    pub fn kappas(&self, ind: &InductanceSet) -> [f64; 5] {
        [
            self.k1 / ind.l_k,
            self.k2 / ind.l_k,
            self.kp1 / ind.lp_k,
            self.kp2 / ind.lp_k,
            self.k / ind.lt_k,
        ]
    }

    /// Relative residuals of the three loop boundary conditions (left, right, α loop)
    /// and the two node conditions, evaluated on the original linear equations.
    pub fn residuals(
        &self,
        ind: &InductanceSet,
        flux: &FluxBias,
        wind: &WindingNumbers,
        phases: &PhaseState,
    ) -> [f64; 5] {
        let a = 1.0 + ind.l_g / ind.l_k;
        let ap = 1.0 + ind.lp_g / ind.lp_k;
        let at = 1.0 + ind.lt_g / ind.lt_k;
        let mm = ind.l_m / ind.l_k;
        let mp = ind.lp_m / ind.lp_k;
        let [p1, p2, p3, p4] = phases.raw();

        let left = [
            -a * self.k1,
            -ap * self.kp1,
            -at * self.k,
            -mp * self.kp2,
            -mm * self.k2,
            -2.0 * PI * (wind.n1 as f64 + flux.f1),
            -(p1 + p3 + p4),
        ];
        let right = [
            a * self.k2,
            ap * self.kp2,
            at * self.k,
            mp * self.kp1,
            mm * self.k1,
            -2.0 * PI * (wind.n2 as f64 + flux.f2),
            p2 + p3 + p4,
        ];
        let alpha = [
            a * self.k1,
            -a * self.k2,
            -2.0 * PI * (wind.n as f64 + flux.f_alpha),
            p1 - p2,
        ];
        let [c1, c2, cp1, cp2, c] = self.kappas(ind);
        let (node_a, node_b): (Vec<f64>, Vec<f64>) = match self.scheme {
            BiasScheme::AlphaLoop => (vec![c, -cp1, -cp2], vec![c, self.bias_kappa, -c1, -c2]),
            BiasScheme::Branch => (vec![cp1, cp2, self.bias_kappa, -c], vec![c, -c1, -c2]),
        };
        [
            relative(&left),
            relative(&right),
            relative(&alpha),
            relative(&node_a),
            relative(&node_b),
        ]
    }
}

fn relative(terms: &[f64]) -> f64 {
    let sum: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if scale < 1e-300 {
        0.0
    } else {
        sum.abs() / scale
    }
}

fn check_denominators(ind: &InductanceSet) -> Result<()> {
    if !(ind.l_k > 0.0 && ind.lp_k > 0.0 && ind.lt_k > 0.0) {
        return Err(GfqError::Domain("kinetic inductances must be positive".into()));
    }
    if !(ind.effective() > 0.0 && ind.alpha_half() > 0.0 && ind.branch_effective() > 0.0) {
        return Err(GfqError::Domain(
            "degenerate inductances: L_eff, L_K+L_g and L'_K+L'_g-L'_M must be positive".into(),
        ));
    }
    Ok(())
}

/// The three loop detunings shared by both schemes.
struct Detunings {
    /// `m + f2 - f1 - (φ₁+φ₂+2φ₃+2φ₄)/2π`
    trapping: f64,
    /// `n + f_α - (φ₁-φ₂)/2π`
    alpha: f64,
    /// Outer-loop fluxoid `m' + f1 + f2 + (1-λ)(n+f_α) + λ(φ₁-φ₂)/2π`, `λ = L_M/(L_K+L_g)`.
    outer: f64,
}

fn detunings(
    ind: &InductanceSet,
    flux: &FluxBias,
    wind: &WindingNumbers,
    phases: &PhaseState,
) -> Detunings {
    let lambda = ind.lm_ratio();
    let diff = (phases.phi1 - phases.phi2) / (2.0 * PI);
    let n_alpha = wind.n as f64 + flux.f_alpha;
    Detunings {
        trapping: wind.m() as f64 + flux.f2 - flux.f1 - phases.loop_sum() / (2.0 * PI),
        alpha: n_alpha - diff,
        outer: wind.mprime() as f64 + flux.f1 + flux.f2 + (1.0 - lambda) * n_alpha + lambda * diff,
    }
}

/// Wave vectors for the α-loop bias `I₀` (reduced `κ₀ = k₀ l / L_K`).
///
/// `k₁,₂` and `k` take the familiar closed form; the antisymmetric branch part
/// `k'₁ - k'₂` is the exact outer-loop solution of the boundary conditions.
pub fn wave_vectors(
    ind: &InductanceSet,
    flux: &FluxBias,
    wind: &WindingNumbers,
    phases: &PhaseState,
    kappa0: f64,
) -> Result<WaveVectorSolution> {
    check_denominators(ind)?;
    let d = detunings(ind, flux, wind, phases);
    let l_eff = ind.effective();

    let c = 2.0 * PI * d.trapping / l_eff - ind.bias_central_weight() * kappa0 / l_eff;
    let alpha_part = PI * d.alpha / ind.alpha_half();
    let outer_part = PI * d.outer / ind.branch_effective();
    let c1 = 0.5 * (c + kappa0) + alpha_part;
    let c2 = 0.5 * (c + kappa0) - alpha_part;
    let cp1 = 0.5 * c - outer_part;
    let cp2 = 0.5 * c + outer_part;

    Ok(WaveVectorSolution {
        k1: c1 * ind.l_k,
        k2: c2 * ind.l_k,
        kp1: cp1 * ind.lp_k,
        kp2: cp2 * ind.lp_k,
        k: c * ind.lt_k,
        scheme: BiasScheme::AlphaLoop,
        bias_kappa: kappa0,
    })
}

/// Wave vectors for the branch-node bias `I'₀` (reduced `κ'₀`).
pub fn wave_vectors_branch(
    ind: &InductanceSet,
    flux: &FluxBias,
    wind: &WindingNumbers,
    phases: &PhaseState,
    kappa0_branch: f64,
) -> Result<WaveVectorSolution> {
    check_denominators(ind)?;
    let d = detunings(ind, flux, wind, phases);
    let l_eff = ind.effective();

    let c = 2.0 * PI * d.trapping / l_eff + ind.branch_bias_weight() * kappa0_branch / l_eff;
    let alpha_part = PI * d.alpha / ind.alpha_half();
    let outer_part = PI * d.outer / ind.branch_effective();
    let c1 = 0.5 * c + alpha_part;
    let c2 = 0.5 * c - alpha_part;
    let cp1 = 0.5 * (c - kappa0_branch) - outer_part;
    let cp2 = 0.5 * (c - kappa0_branch) + outer_part;

    Ok(WaveVectorSolution {
        k1: c1 * ind.l_k,
        k2: c2 * ind.l_k,
        kp1: cp1 * ind.lp_k,
        kp2: cp2 * ind.lp_k,
        k: c * ind.lt_k,
        scheme: BiasScheme::Branch,
        bias_kappa: kappa0_branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_flux() -> FluxBias {
        FluxBias {
            f1: 0.0,
            f2: 0.0,
            f_alpha: 0.0,
        }
    }

    #[test]
    fn homogeneous_inputs_give_zero() {
        let ind = InductanceSet::reference();
        let w = WindingNumbers { n1: 0, n2: 0, n: 0 };
        let s = wave_vectors(&ind, &zero_flux(), &w, &PhaseState::default(), 0.0).unwrap();
        assert_eq!([s.k1, s.k2, s.kp1, s.kp2, s.k], [0.0; 5]);
        let s = wave_vectors_branch(&ind, &zero_flux(), &w, &PhaseState::default(), 0.0).unwrap();
        assert_eq!([s.k1, s.k2, s.kp1, s.kp2, s.k], [0.0; 5]);
    }

    #[test]
    fn alpha_loop_flux_splits_symmetrically() {
        // Only L_K = L_g = 1 matter for k1,2; the rest just keep the set valid.
        let ind = InductanceSet {
            l_k: 1.0,
            l_g: 1.0,
            lp_k: 1.0,
            lp_g: 0.0,
            lt_k: 1.0,
            lt_g: 0.0,
            l_m: 0.0,
            lp_m: 0.0,
        };
        let flux = FluxBias {
            f1: 0.0,
            f2: 0.0,
            f_alpha: 0.2,
        };
        let w = WindingNumbers { n1: 0, n2: 0, n: 0 };
        let s = wave_vectors(&ind, &flux, &w, &PhaseState::default(), 0.0).unwrap();
        assert!((s.k1 - 0.1 * PI).abs() < 1e-15);
        assert!((s.k2 + 0.1 * PI).abs() < 1e-15);
    }

    #[test]
    fn branch_bias_node_identities() {
        let ind = InductanceSet::reference();
        let w = WindingNumbers { n1: 0, n2: 0, n: 0 };
        let kb = 0.37;
        let s = wave_vectors_branch(&ind, &zero_flux(), &w, &PhaseState::default(), kb).unwrap();
        let [c1, c2, cp1, cp2, c] = s.kappas(&ind);
        assert!((c - (c1 + c2)).abs() < 1e-15);
        assert!((cp1 + cp2 - (c - kb)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inductance_is_a_domain_error() {
        let mut ind = InductanceSet::reference();
        ind.lp_m = ind.branch();
        let w = WindingNumbers { n1: 0, n2: 0, n: 0 };
        let err = wave_vectors(&ind, &zero_flux(), &w, &PhaseState::default(), 0.0);
        assert!(matches!(err, Err(GfqError::Domain(_))));
    }

    #[test]
    fn plug_back_reference_point() {
        let p = crate::circuit_model::CircuitParams::reference();
        let ph = PhaseState::new(0.4, -2.1, 1.3, 0.2);
        for s in [
            wave_vectors(&p.inductance, &p.flux, &p.winding, &ph, 0.05).unwrap(),
            wave_vectors_branch(&p.inductance, &p.flux, &p.winding, &ph, -0.08).unwrap(),
        ] {
            let r = s.residuals(&p.inductance, &p.flux, &p.winding, &ph);
            assert!(r.iter().all(|x| *x <= 1e-14), "{r:?}");
        }
    }
}
