use std::f64::consts::PI;

use gfq_core::circuit_model::*;
use gfq_core::cqed::*;
use gfq_core::landscape::*;
use gfq_core::observables::*;
use gfq_core::spectrum::*;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn inductances() -> impl Strategy<Value = InductanceSet> {
    (
        prop::array::uniform4(0.1..20.0f64),
        prop::array::uniform2(0.1..20.0f64),
        prop::array::uniform2(0.0..0.9f64),
    )
        .prop_map(|([l_k, l_g, lp_k, lp_g], [lt_k, lt_g], [a, b])| InductanceSet {
            l_k,
            l_g,
            lp_k,
            lp_g,
            lt_k,
            lt_g,
            l_m: a * (l_k + l_g),
            lp_m: b * (lp_k + lp_g),
        })
}

fn phases() -> impl Strategy<Value = PhaseState> {
    prop::array::uniform4(-2.0 * PI..2.0 * PI).prop_map(|[a, b, c, d]| PhaseState::new(a, b, c, d))
}

fn params() -> impl Strategy<Value = CircuitParams> {
    (
        inductances(),
        prop::array::uniform3(-1.0..1.0f64),
        (-2i64..=2, -2i64..=2, -2i64..=2),
        (0.5..3.0f64, 100.0..3000.0f64, 100.0..5000.0f64),
    )
        .prop_map(|(ind, [f1, f2, fa], (n1, n2, n), (r, sl, sa))| CircuitParams {
            inductance: ind,
            flux: FluxBias::new(f1, f2, fa).unwrap(),
            winding: WindingNumbers { n1, n2, n },
            junctions: JunctionEnergies {
                ej_ratio: r,
                ec: 0.025,
                stiffness_loop: sl,
                stiffness_alpha: sa,
            },
        })
}

/// Reference circuit with a chosen ratio and `f_α` that still has two wells.
fn double_well_params() -> impl Strategy<Value = CircuitParams> {
    (1.0..3.0f64, 0.0..0.3f64)
        .prop_filter("double well", |&(r, fa)| {
            let a = double_well_argument(r, fa, 1);
            a > 0.1 && a < 0.9
        })
        .prop_map(|(r, fa)| {
            let mut p = CircuitParams::reference();
            p.junctions.ej_ratio = r;
            p.flux.f_alpha = fa;
            p
        })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn coordinate_round_trip(s in phases()) {
        let t = TransformedPhases::from(&s);
        let back = PhaseState::from(&t);
        for (a, b) in s.raw().iter().zip(back.raw()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn transformed_potential_matches_raw(p in params(), s in phases(), beta in -0.1..0.1f64) {
        let t = TransformedPhases::from(&s);
        prop_assert!(close(u_eff_transformed(&p, &t, beta), u_eff(&p, &s, beta), 1e-12));
    }

    #[test]
    fn gradiometric_evenness(p in params(), phi_p in -2.0 * PI..2.0 * PI, phit_m in -PI..PI) {
        let f = FluxBias::new(p.flux.f1, p.flux.f1, p.flux.f_alpha).unwrap();
        let w = WindingNumbers { n1: p.winding.n1, n2: p.winding.n1, n: p.winding.n };
        let v = ReducedPotential::new(p.junctions.ej_ratio, &f, &w, 0.0);
        prop_assert!(close(v.value(phi_p, phit_m), v.value(-phi_p, phit_m), 1e-12));
    }

    #[test]
    fn global_flux_shift(p in params(), shift in -5.0..5.0f64, phi_p in -2.0 * PI..2.0 * PI, phit_m in -PI..PI, beta in -0.1..0.1f64) {
        let f = p.flux;
        let moved = FluxBias::new(f.f1 + shift, f.f2 + shift, f.f_alpha).unwrap();
        let r = p.junctions.ej_ratio;
        prop_assert!(close(
            v_reduced(r, &f, &p.winding, phi_p, phit_m, beta),
            v_reduced(r, &moved, &p.winding, phi_p, phit_m, beta),
            1e-12
        ));
    }

    #[test]
    fn branch_bias_is_flat_on_constraint_surface(p in params(), phi1 in -PI..PI, phi3 in -PI..PI, b in -0.2..0.2f64) {
        let phi2 = phi1 - 2.0 * PI * p.alpha_target();
        let phi4 = 0.5 * (2.0 * PI * p.loop_target() - phi1 - phi2 - 2.0 * phi3);
        let s = PhaseState::new(phi1, phi2, phi3, phi4);
        let g1 = u_eff_branch_gradient(&p, &s, b);
        let g0 = u_eff_branch_gradient(&p, &s, 0.0);
        let w: Vec<f64> = g1.iter().zip(g0).map(|(a, c)| a - c).collect();
        // tangent directions keeping both fluxoid constraints
        let t1 = [1.0, 1.0, 0.0, -1.0];
        let t2 = [0.0, 0.0, 1.0, -1.0];
        let dot = |t: &[f64; 4]| t.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        let scale = w.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        prop_assert!(dot(&t1).abs() <= 1e-12 * scale);
        prop_assert!(dot(&t2).abs() <= 1e-12 * scale);

        let other = PhaseState::new(phi1 + 0.7, phi2 + 0.7, phi3 - 0.3, phi4 - 0.4);
        let a = u_eff_branch_parts(&p, &s, b).bias;
        let c = u_eff_branch_parts(&p, &other, b).bias;
        prop_assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn extra_junctions_add_a_constant(p in params(), s in phases(), t in phases()) {
        let expect = p.stiffness_branch() * outer_loop_offset(&p).powi(2);
        for st in [s, t] {
            let d = u_eff_appendix(&p, &st) - u_eff(&p, &st, 0.0);
            let scale = u_eff(&p, &st, 0.0).abs().max(expect.abs()).max(1.0);
            prop_assert!((d - expect).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn unbiased_potential_ignores_inductances(p in params(), ind in inductances(), x in prop::array::uniform4(-PI..PI)) {
        let mut q = p;
        q.inductance = ind;
        let a = TransformedPotential::new(p, Bias::None);
        let b = TransformedPotential::new(q, Bias::None);
        prop_assert_eq!(a.value(&x), b.value(&x));
        prop_assert_eq!(
            ReducedPotential::from_params(&p, 0.01).value(x[0], x[1]),
            ReducedPotential::from_params(&q, 0.01).value(x[0], x[1])
        );
    }

    #[test]
    fn coupling_ignores_inductances(p in double_well_params(), ib in 0.1..2.0f64, ind in inductances()) {
        let mut q = p;
        q.inductance = ind;
        let g = |c: &CircuitParams| coupling_strength(c.junctions.ej_ratio, c.flux.f_alpha, ib).unwrap();
        prop_assert_eq!(g(&p), g(&q));
        let alpha = alpha_param(p.junctions.ej_ratio, p.flux.f_alpha).unwrap();
        prop_assert!(close(g(&p), ib * alpha / (2.0 * PI), 1e-12));
    }

    #[test]
    fn hamiltonians_are_hermitian(delta in 0.0..2.0f64, g in 0.0..0.2f64, omega in 0.0..2.0f64, cutoff in 5usize..12) {
        prop_assert!(build_qubit_resonator_h(delta, g, omega, cutoff).unwrap().hermiticity_error() <= 1e-14);
        prop_assert!(build_rwa_h(delta, g, omega, cutoff).unwrap().hermiticity_error() <= 1e-14);
        let tq = TwoQubitParams { delta_l: delta, delta_r: 1.3 * delta, g_l: g, g_r: 0.7 * g, omega1: omega };
        prop_assert!(tavis_cummings_h(&tq, cutoff.min(8)).unwrap().hermiticity_error() <= 1e-14);
        prop_assert!(dispersive_two_qubit_h(&tq, cutoff.min(8), true).unwrap().hermiticity_error() <= 1e-14);
    }

    #[test]
    fn evolution_preserves_norm(delta in 0.1..2.0f64, g in 0.0..0.2f64, t in 0.0..500.0f64, re in prop::collection::vec(-1.0..1.0f64, 12), im in prop::collection::vec(-1.0..1.0f64, 12)) {
        let h = build_qubit_resonator_h(delta, g, 1.0, 6).unwrap();
        let mut s = DVector::from_iterator(12, re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)));
        prop_assume!(s.norm() > 1e-3);
        s /= Complex64::new(s.norm(), 0.0);
        let out = time_evolve(&h, &s, t, Some(1.0)).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn minima_follow_closed_form(p in double_well_params()) {
        let v = ReducedPotential::from_params(&p, 0.0);
        let s = find_minima(&v, &SeedGrid::default());
        let a = analytic_minima(p.junctions.ej_ratio, p.flux.f_alpha, 1).unwrap();
        prop_assert_eq!(s.minima.len(), 2);
        let (down, up) = (s.down().unwrap(), s.up().unwrap());
        prop_assert!((down.phi_p + a.phi_p).abs() <= 1e-6);
        prop_assert!((up.phi_p - a.phi_p).abs() <= 1e-6);
        prop_assert!(down.phit_m.abs() <= 1e-6 && up.phit_m.abs() <= 1e-6);
        prop_assert!((down.energy - up.energy).abs() <= 1e-10);
    }

    #[test]
    fn full_model_wells_are_degenerate(p in double_well_params()) {
        let pot = TransformedPotential::new(p, Bias::None);
        let s = find_minima(&pot, &SeedGrid::default());
        let (down, up) = (s.down().unwrap(), s.up().unwrap());
        prop_assert!((down.energy - up.energy).abs() <= 1e-10);
        prop_assert!((down.phi_p + up.phi_p).abs() <= 1e-6);
    }

    #[test]
    fn kirchhoff_dual_route(p in double_well_params()) {
        let p = p.with_consistent_stiffness();
        let pot = TransformedPotential::new(p, Bias::None);
        let s = find_minima(&pot, &SeedGrid::default());
        for m in [s.down().unwrap(), s.up().unwrap()] {
            let junction = loop_currents(&p, m, None).unwrap().ialpha;
            let x = &m.position;
            let st = PhaseState::from(&TransformedPhases { phi_p: x[0], phit_m: x[1], phi_m: x[2], phit_p: x[3] });
            let deficit = p.alpha_target() - (st.phi1 - st.phi2) / (2.0 * PI);
            let inductive = -0.5 * deficit * p.inductance.effective() / p.inductance.alpha_half();
            prop_assert!((junction - inductive).abs() <= 1e-6 * junction.abs().max(1e-6), "{junction} vs {inductive}");
        }
    }
}

#[test]
fn resonator_modes_are_orthogonal() {
    let r = ResonatorParams::new(2.0, 1.0, 1.0, 1.0, None, Some(1.0)).unwrap();
    let n = 10_000;
    let h = r.length / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| (-0.5 * r.length + i as f64 * h).min(0.5 * r.length)).collect();
    let inner = |a: u32, b: u32| {
        let f: Vec<f64> = xs.iter().map(|&x| r.mode_shape(a, x).unwrap() * r.mode_shape(b, x).unwrap()).collect();
        h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1]))
    };
    for a in 1..=4 {
        for b in (a + 1)..=4 {
            let c = inner(a, b) / (inner(a, a) * inner(b, b)).sqrt();
            assert!(c.abs() <= 1e-8, "modes {a}, {b}: {c:e}");
        }
    }
}

#[test]
fn resonator_coupling_matches_observable() {
    let r = ResonatorParams::new(1.5, 0.8, 1.2, 1.0, Some(0.1), None).unwrap();
    let phi0 = 2.0;
    let alpha = alpha_param(2.0, 0.2).unwrap();
    let ib = r.bias_amplitude().unwrap();
    let g = r.coupling(alpha, phi0, 2).unwrap();
    let g_obs = coupling_strength(2.0, 0.2, phi0 * ib).unwrap();
    assert!((g - g_obs).abs() <= 1e-12 * g.abs());
}

#[test]
fn tight_binding_is_hermitian() {
    let spec = QubitSpectrum::new(-2.85, -2.85, 1e-4, 1.8).unwrap();
    for beta in [0.0, 1e-3, -0.02] {
        assert!(tight_binding_h(&spec, beta).hermiticity_error() <= 1e-14);
    }
}
