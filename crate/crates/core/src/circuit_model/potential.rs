use std::f64::consts::PI;

use serde::Serialize;

use super::params::{CircuitParams, FluxBias, PhaseState, TransformedPhases, WindingNumbers};

/// `U_eff` split into inductive, Josephson and bias-coupling parts (units of `E_J`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PotentialParts {
    pub inductive: f64,
    pub josephson: f64,
    pub bias: f64,
}

impl PotentialParts {
    pub fn total(&self) -> f64 {
        self.inductive + self.josephson + self.bias
    }
}

/// Which bias line drives the circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub enum Bias {
    #[default]
    None,
    /// `β₀` through the α loop.
    Current(f64),
    /// `β'₀` into the branch node.
    Branch(f64),
}

fn trapping_detuning(params: &CircuitParams, s: &PhaseState) -> f64 {
    params.loop_target() - s.loop_sum() / (2.0 * PI)
}

fn alpha_detuning(params: &CircuitParams, s: &PhaseState) -> f64 {
    params.alpha_target() - (s.phi1 - s.phi2) / (2.0 * PI)
}

fn josephson(params: &CircuitParams, s: &PhaseState) -> f64 {
    let r = params.junctions.ej_ratio;
    -s.phi1.cos() - s.phi2.cos() - r * (s.phi3.cos() + s.phi4.cos())
}

/// Per-phase weights of the bias term: `U_bias = Σ wᵢ φᵢ`.
fn bias_weights(params: &CircuitParams, bias: Bias) -> [f64; 4] {
    let ind = &params.inductance;
    let l_eff = ind.effective();
    match bias {
        Bias::None => [0.0; 4],
        Bias::Current(b) => {
            let p = b * ind.bias_phi_p_weight() / (2.0 * l_eff);
            let c = -b * ind.bias_central_weight() / l_eff;
            [p, p, c, c]
        }
        Bias::Branch(b) => {
            let w = b * ind.branch_bias_weight() / (2.0 * l_eff);
            [w, w, 2.0 * w, 2.0 * w]
        }
    }
}

fn parts_with(params: &CircuitParams, s: &PhaseState, bias: Bias) -> PotentialParts {
    let x = trapping_detuning(params, s);
    let y = alpha_detuning(params, s);
    let j = &params.junctions;
    let w = bias_weights(params, bias);
    PotentialParts {
        inductive: j.stiffness_loop * x * x + j.stiffness_alpha * y * y,
        josephson: josephson(params, s),
        bias: w.iter().zip(s.raw()).map(|(w, p)| w * p).sum(),
    }
}

fn gradient_with(params: &CircuitParams, s: &PhaseState, bias: Bias) -> [f64; 4] {
    let x = trapping_detuning(params, s);
    let y = alpha_detuning(params, s);
    let j = &params.junctions;
    let w = bias_weights(params, bias);
    let lx = j.stiffness_loop * x / PI;
    let ay = j.stiffness_alpha * y / PI;
    let r = j.ej_ratio;
    [
        -lx - ay + s.phi1.sin() + w[0],
        -lx + ay + s.phi2.sin() + w[1],
        -2.0 * lx + r * s.phi3.sin() + w[2],
        -2.0 * lx + r * s.phi4.sin() + w[3],
    ]
}

/// Effective potential of the α-loop-biased GFQ in raw phases.
pub fn u_eff(params: &CircuitParams, phases: &PhaseState, beta0: f64) -> f64 {
    u_eff_parts(params, phases, beta0).total()
}

pub fn u_eff_parts(params: &CircuitParams, phases: &PhaseState, beta0: f64) -> PotentialParts {
    parts_with(params, phases, Bias::Current(beta0))
}

/// `∂U_eff/∂φᵢ`, `i = 1..4`.
pub fn u_eff_gradient(params: &CircuitParams, phases: &PhaseState, beta0: f64) -> [f64; 4] {
    gradient_with(params, phases, Bias::Current(beta0))
}

/// The same potential written in `(φ_p, φ_m, φ̃_p, φ̃_m)`.
pub fn u_eff_transformed(params: &CircuitParams, t: &TransformedPhases, beta0: f64) -> f64 {
    TransformedPotential::new(*params, Bias::Current(beta0)).value(&[t.phi_p, t.phit_m, t.phi_m, t.phit_p])
}

/// Effective potential with the bias injected at the branch node.
pub fn u_eff_branch(params: &CircuitParams, phases: &PhaseState, beta_branch: f64) -> f64 {
    parts_with(params, phases, Bias::Branch(beta_branch)).total()
}

pub fn u_eff_branch_parts(params: &CircuitParams, phases: &PhaseState, beta_branch: f64) -> PotentialParts {
    parts_with(params, phases, Bias::Branch(beta_branch))
}

pub fn u_eff_branch_gradient(params: &CircuitParams, phases: &PhaseState, beta_branch: f64) -> [f64; 4] {
    gradient_with(params, phases, Bias::Branch(beta_branch))
}

/// `m' + f1 + f2 + (1 - L_M/(L_K+L_g)) f_α`, the outer-loop fluxoid with the α-loop
/// winding left out. It is the argument of the extra-junction constant term.
pub fn outer_loop_offset(params: &CircuitParams) -> f64 {
    let f = &params.flux;
    params.winding.mprime() as f64
        + f.f1
        + f.f2
        + (1.0 - params.inductance.lm_ratio()) * f.f_alpha
}

/// Integer `m'` minimising `[m' + f1 + f2 + (1-λ) f_α]²`; an exact tie goes to the smaller integer.
pub fn optimal_mprime(f1: f64, f2: f64, f_alpha: f64, lm_ratio: f64) -> i64 {
    let x = -(f1 + f2 + (1.0 - lm_ratio) * f_alpha);
    let lo = x.floor();
    if x - lo > 0.5 {
        lo as i64 + 1
    } else {
        lo as i64
    }
}

/// Effective potential of the circuit with the two extra trapping-loop junctions,
/// whose phases are `phip1`, `phip2` (they carry no Josephson energy in the limit considered).
pub fn u_eff_appendix(params: &CircuitParams, phases: &PhaseState) -> f64 {
    let j = &params.junctions;
    let x = trapping_detuning(params, phases) + (phases.phip1 + phases.phip2) / (2.0 * PI);
    let y = alpha_detuning(params, phases);
    let z = outer_loop_offset(params) - (phases.phip1 - phases.phip2) / (2.0 * PI);
    j.stiffness_loop * x * x
        + j.stiffness_alpha * y * y
        + params.stiffness_branch() * z * z
        + josephson(params, phases)
}

/// Gradient of [`u_eff_appendix`] in the order `φ₁..φ₄, φ'₁, φ'₂`.
pub fn u_eff_appendix_gradient(params: &CircuitParams, phases: &PhaseState) -> [f64; 6] {
    let j = &params.junctions;
    let x = trapping_detuning(params, phases) + (phases.phip1 + phases.phip2) / (2.0 * PI);
    let y = alpha_detuning(params, phases);
    let z = outer_loop_offset(params) - (phases.phip1 - phases.phip2) / (2.0 * PI);
    let lx = j.stiffness_loop * x / PI;
    let ay = j.stiffness_alpha * y / PI;
    let bz = params.stiffness_branch() * z / PI;
    let r = j.ej_ratio;
    [
        -lx - ay + phases.phi1.sin(),
        -lx + ay + phases.phi2.sin(),
        -2.0 * lx + r * phases.phi3.sin(),
        -2.0 * lx + r * phases.phi4.sin(),
        lx - bz,
        lx + bz,
    ]
}

/// The full effective potential on coordinates `[φ_p, φ̃_m, φ_m, φ̃_p]`, either bias.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransformedPotential {
    pub params: CircuitParams,
    pub bias: Bias,
}

impl TransformedPotential {
    pub fn new(params: CircuitParams, bias: Bias) -> Self {
        Self { params, bias }
    }

    /// Weights of `φ_p` and `φ̃_p` in the linear bias term.
    fn bias_weights(&self) -> (f64, f64) {
        let w = bias_weights(&self.params, self.bias);
        (w[0] + w[1], w[2] + w[3])
    }

    fn detunings(&self, x: &[f64; 4]) -> (f64, f64) {
        let p = &self.params;
        (
            p.loop_target() - (x[0] + 2.0 * x[3]) / PI,
            p.alpha_target() - x[2] / PI,
        )
    }

    pub fn parts(&self, x: &[f64; 4]) -> PotentialParts {
        let j = &self.params.junctions;
        let (a, b) = self.detunings(x);
        let (wp, wt) = self.bias_weights();
        PotentialParts {
            inductive: j.stiffness_loop * a * a + j.stiffness_alpha * b * b,
            josephson: -2.0 * x[0].cos() * x[2].cos() - 2.0 * j.ej_ratio * x[3].cos() * x[1].cos(),
            bias: wp * x[0] + wt * x[3],
        }
    }

    pub fn value(&self, x: &[f64; 4]) -> f64 {
        self.parts(x).total()
    }

    pub fn gradient(&self, x: &[f64; 4]) -> [f64; 4] {
        let j = &self.params.junctions;
        let r = j.ej_ratio;
        let (a, b) = self.detunings(x);
        let (wp, wt) = self.bias_weights();
        let la = 2.0 * j.stiffness_loop * a / PI;
        let (sp, cp) = x[0].sin_cos();
        let (st, ct) = x[1].sin_cos();
        let (sm, cm) = x[2].sin_cos();
        let (stp, ctp) = x[3].sin_cos();
        [
            -la + 2.0 * sp * cm + wp,
            2.0 * r * ctp * st,
            -2.0 * j.stiffness_alpha * b / PI + 2.0 * cp * sm,
            -2.0 * la + 2.0 * r * stp * ct + wt,
        ]
    }

    pub fn hessian(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        let j = &self.params.junctions;
        let r = j.ej_ratio;
        let kl = 2.0 * j.stiffness_loop / (PI * PI);
        let ka = 2.0 * j.stiffness_alpha / (PI * PI);
        let (sp, cp) = x[0].sin_cos();
        let (st, ct) = x[1].sin_cos();
        let (sm, cm) = x[2].sin_cos();
        let (stp, ctp) = x[3].sin_cos();
        let pp = kl + 2.0 * cp * cm;
        let tt = 2.0 * r * ctp * ct;
        let mm = ka + 2.0 * cp * cm;
        let qq = 4.0 * kl + 2.0 * r * ctp * ct;
        let pm = -2.0 * sp * sm;
        let pq = 2.0 * kl;
        let tq = -2.0 * r * stp * st;
        [
            [pp, 0.0, pm, pq],
            [0.0, tt, 0.0, tq],
            [pm, 0.0, mm, 0.0],
            [pq, tq, 0.0, qq],
        ]
    }

    /// Point on the hard-constraint surface above `(φ_p, φ̃_m)`.
    pub fn lift(&self, phi_p: f64, phit_m: f64) -> [f64; 4] {
        let p = &self.params;
        [
            phi_p,
            phit_m,
            PI * p.alpha_target(),
            0.5 * (PI * p.loop_target() - phi_p),
        ]
    }
}

/// The constraint-reduced potential in `(φ_p, φ̃_m)` with the α-loop bias tilt `β₀ φ_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReducedPotential {
    pub ej_ratio: f64,
    /// `m + f2 - f1`
    pub loop_target: f64,
    /// `n + f_α`
    pub alpha_target: f64,
    pub beta0: f64,
}

impl ReducedPotential {
    pub fn new(ej_ratio: f64, flux: &FluxBias, wind: &WindingNumbers, beta0: f64) -> Self {
        Self {
            ej_ratio,
            loop_target: wind.m() as f64 + flux.f2 - flux.f1,
            alpha_target: wind.n as f64 + flux.f_alpha,
            beta0,
        }
    }

    pub fn from_params(params: &CircuitParams, beta0: f64) -> Self {
        Self::new(params.junctions.ej_ratio, &params.flux, &params.winding, beta0)
    }

    /// `cos π(n + f_α)`: the effective α-junction weight.
    pub fn alpha_weight(&self) -> f64 {
        (PI * self.alpha_target).cos()
    }

    fn half_angle(&self, phi_p: f64) -> f64 {
        0.5 * (PI * self.loop_target - phi_p)
    }

    pub fn value(&self, phi_p: f64, phit_m: f64) -> f64 {
        -2.0 * self.alpha_weight() * phi_p.cos()
            - 2.0 * self.ej_ratio * self.half_angle(phi_p).cos() * phit_m.cos()
            + self.beta0 * phi_p
    }

    pub fn gradient(&self, phi_p: f64, phit_m: f64) -> [f64; 2] {
        let a = self.alpha_weight();
        let r = self.ej_ratio;
        let (su, cu) = self.half_angle(phi_p).sin_cos();
        let (st, ct) = phit_m.sin_cos();
        [
            2.0 * a * phi_p.sin() - r * su * ct + self.beta0,
            2.0 * r * cu * st,
        ]
    }

    pub fn hessian(&self, phi_p: f64, phit_m: f64) -> [[f64; 2]; 2] {
        let a = self.alpha_weight();
        let r = self.ej_ratio;
        let (su, cu) = self.half_angle(phi_p).sin_cos();
        let (st, ct) = phit_m.sin_cos();
        let pt = r * su * st;
        [
            [2.0 * a * phi_p.cos() + 0.5 * r * cu * ct, pt],
            [pt, 2.0 * r * cu * ct],
        ]
    }
}

/// Reduced potential `V(φ_p, φ̃_m)` in units of `E_J`.
pub fn v_reduced(
    ej_ratio: f64,
    flux: &FluxBias,
    wind: &WindingNumbers,
    phi_p: f64,
    phit_m: f64,
    beta0: f64,
) -> f64 {
    ReducedPotential::new(ej_ratio, flux, wind, beta0).value(phi_p, phit_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_reduced() -> ReducedPotential {
        ReducedPotential::from_params(&CircuitParams::reference(), 0.0)
    }

    #[test]
    fn reduced_values() {
        let v = reference_reduced();
        let expected = 2.0 * (0.2 * PI).cos() - 4.0;
        assert!((v.value(0.0, 0.0) - expected).abs() < 1e-12);
        assert!((v.value(0.0, 0.0) + 2.381966).abs() < 1e-6);
        for s in [1.0, -1.0] {
            assert!((v.value(s * 1.80911, 0.0) + 2.854102).abs() < 1e-6);
        }
    }

    #[test]
    fn reduced_tilt_is_odd_part() {
        let mut v = reference_reduced();
        v.beta0 = 0.013;
        for phi in [0.3, 1.1, 2.7] {
            let d = v.value(phi, 0.4) - v.value(-phi, 0.4);
            assert!((d - 2.0 * 0.013 * phi).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_phase_decomposition() {
        let mut p = CircuitParams::reference();
        p.flux = FluxBias::new(0.3, 0.3, 0.0).unwrap();
        p.winding = WindingNumbers { n1: 0, n2: 0, n: 1 };
        let parts = u_eff_parts(&p, &PhaseState::default(), 0.0);
        assert_eq!(parts.josephson, -(2.0 + 2.0 * p.junctions.ej_ratio));
        assert!((parts.inductive - p.junctions.stiffness_alpha).abs() < 1e-9);
        assert_eq!(parts.bias, 0.0);
    }

    #[test]
    fn inductive_terms_vanish_on_constraint() {
        let p = CircuitParams::reference();
        let t = TransformedPotential::new(p, Bias::None);
        let x = t.lift(0.0, 0.0);
        assert!(t.parts(&x).inductive.abs() < 1e-20);
    }

    #[test]
    fn mprime_selection() {
        assert_eq!(optimal_mprime(0.94, 0.94, 0.2, 0.4), -2);
        assert_eq!(optimal_mprime(0.0, 0.0, 0.0, 0.7), 0);
        assert_eq!(optimal_mprime(0.25, 0.25, 0.0, 0.0), -1);
    }

    #[test]
    fn extra_junction_constant_vanishes_at_reference() {
        let p = CircuitParams::reference();
        assert!(outer_loop_offset(&p).abs() < 1e-14);
        let s = PhaseState::new(0.2, -0.7, 1.1, 0.4);
        assert!((u_eff_appendix(&p, &s) - u_eff(&p, &s, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn branch_bias_constant_on_constraint_surface() {
        let p = CircuitParams::reference();
        let b = 0.07;
        let expected = b * p.inductance.branch_bias_weight() / (2.0 * p.inductance.effective())
            * 2.0
            * PI
            * p.loop_target();
        for phi_p in [-1.8, 0.0, 0.9] {
            let t = TransformedPotential::new(p, Bias::Branch(b));
            let x = t.lift(phi_p, 0.3);
            assert!((t.parts(&x).bias - expected).abs() < 1e-12);
        }
    }
}
