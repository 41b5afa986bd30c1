use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Format, Model, RunConfig};
use crate::circuit_model::{
    optimal_mprime, Bias, CircuitParams, ReducedPotential, TransformedPotential, WindingNumbers,
};
use crate::cqed::{
    basis_state, build_qubit_resonator_h, build_rwa_h, check_fock_cutoff, dispersive_two_qubit_h, evolve_series,
    exchange_splitting, oscillation_period, qubit_population, tavis_cummings_h, top_fock_population,
};
use crate::landscape::{
    analytic_minima, double_well_cut, find_minima, grid_scan, GridAxis, LocalMinimum, MinimaSearch, PhasePotential,
    SeedGrid, WellLabel,
};
use crate::observables::{coupling_strength, g_curve, loop_currents, to_si, Quantity, CURRENT_SIGN_NOTE};
use crate::spectrum::{alpha_param, splitting_2d, tunneling_gap_1d, GapResult, MassModel, SchrodingerGrid};
use crate::{csv_float, GfqError, Result};

pub const VERSION: &str = concat!("gfq ", env!("CARGO_PKG_VERSION"));

/// Rendered command output and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

pub fn json_report(cfg: &RunConfig, command: &str, payload: Value) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("config".into(), json!(cfg.echo()));
    obj.insert("version".into(), json!(VERSION));
    if let Value::Object(map) = payload {
        obj.extend(map);
    } else {
        obj.insert("result".into(), payload);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("report serialises");
    s.push('\n');
    s
}

pub fn csv_report(cfg: &RunConfig, body: &str) -> String {
    let mut out = format!("# {VERSION}\n");
    for line in cfg.echo().lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {line}");
        }
    }
    out.push_str(body);
    out
}

fn format_of(cfg: &RunConfig, default: Format) -> Format {
    cfg.output.format.unwrap_or(default)
}

fn no_csv(command: &str) -> GfqError {
    GfqError::Config(format!("{command} has no CSV form; use --format json"))
}

fn potential(params: &CircuitParams, model: Model, beta0: f64, beta_branch: f64) -> Box<dyn PhasePotential> {
    match model {
        Model::Reduced => Box::new(ReducedPotential::from_params(params, beta0)),
        Model::Full => {
            let bias = if beta_branch != 0.0 {
                Bias::Branch(beta_branch)
            } else if beta0 != 0.0 {
                Bias::Current(beta0)
            } else {
                Bias::None
            };
            Box::new(TransformedPotential::new(*params, bias))
        }
    }
}

fn seeds(cfg: &RunConfig) -> SeedGrid {
    SeedGrid {
        n_phi_p: cfg.solver.seeds,
        n_phit_m: cfg.solver.seeds,
        ..SeedGrid::default()
    }
}

#[derive(Serialize)]
struct MinimumRow<'a> {
    #[serde(flatten)]
    minimum: &'a LocalMinimum,
    inductive: Option<f64>,
    josephson: Option<f64>,
}

fn minimum_rows<'a>(params: &CircuitParams, search: &'a MinimaSearch) -> Vec<MinimumRow<'a>> {
    let full = TransformedPotential::new(*params, Bias::None);
    search
        .minima
        .iter()
        .map(|m| {
            let parts = (m.position.len() == 4)
                .then(|| full.parts(&[m.position[0], m.position[1], m.position[2], m.position[3]]));
            MinimumRow {
                minimum: m,
                inductive: parts.map(|p| p.inductive),
                josephson: parts.map(|p| p.josephson),
            }
        })
        .collect()
}

/// Wells are expected when `m + n` is odd.
fn well_status(search: &MinimaSearch, wind: &WindingNumbers) -> (&'static str, i32) {
    if search.down().is_some() && search.up().is_some() {
        ("double_well", 0)
    } else if (wind.m() + wind.n).rem_euclid(2) == 1 {
        ("no_double_well", 2)
    } else {
        ("single_well", 0)
    }
}

pub fn cmd_minima(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.circuit_params()?;
    let model = cfg.solver.model.unwrap_or(Model::Reduced);
    let pot = potential(&params, model, cfg.drive.beta0, cfg.drive.beta_branch);
    let search = find_minima(pot.as_ref(), &seeds(cfg));
    let (status, code) = well_status(&search, &params.winding);
    let j = &params.junctions;
    let w = &params.winding;
    let analytic = analytic_minima(j.ej_ratio, params.flux.f_alpha, w.n + w.m()).ok();
    let separation = match (search.down(), search.up()) {
        (Some(d), Some(u)) => Some(u.phi_p - d.phi_p),
        _ => None,
    };
    let payload = json!({
        "model": model,
        "status": status,
        "double_well_argument": pot.double_well_argument(),
        "well_center_phi_p": pot.well_center(),
        "minima": minimum_rows(&params, &search),
        "analytic": analytic,
        "separation_phi_p": separation,
        "analytic_separation_phi_p": analytic.map(|a| 2.0 * a.phi_p),
    });
    match format_of(cfg, Format::Json) {
        Format::Json => Ok(Outcome {
            text: json_report(cfg, "minima", payload),
            code,
        }),
        Format::Csv => {
            let mut body = String::from("label,phi_p,phitilde_m,energy,gradient_norm,min_curvature\n");
            for m in &search.minima {
                let label = serde_json::to_value(m.label).expect("label");
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    label.as_str().unwrap_or(""),
                    csv_float(m.phi_p),
                    csv_float(m.phit_m),
                    csv_float(m.energy),
                    csv_float(m.gradient_norm),
                    csv_float(m.min_curvature)
                );
            }
            Ok(Outcome {
                text: csv_report(cfg, &body),
                code,
            })
        }
    }
}

pub fn cmd_landscape(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.circuit_params()?;
    let model = cfg.solver.model.unwrap_or(Model::Reduced);
    let pot = potential(&params, model, cfg.drive.beta0, cfg.drive.beta_branch);
    let n = cfg.solver.grid_points;
    let phi_p = GridAxis {
        points: n,
        ..GridAxis::phi_p_default()
    };
    let phit_m = GridAxis {
        points: n,
        ..GridAxis::phit_m_default()
    };
    let land = grid_scan(pot.as_ref(), phi_p, phit_m)?;
    Ok(Outcome::ok(match format_of(cfg, Format::Csv) {
        Format::Csv => csv_report(cfg, &land.to_csv()),
        Format::Json => json_report(
            cfg,
            "landscape",
            json!({ "model": model, "grid_min": land.grid_min(), "landscape": land }),
        ),
    }))
}

pub fn cmd_cut(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.circuit_params()?;
    let model = cfg.solver.model.unwrap_or(Model::Reduced);
    let pot = potential(&params, model, cfg.drive.beta0, cfg.drive.beta_branch);
    let cut = double_well_cut(pot.as_ref(), cfg.solver.cut_points)?;
    Ok(Outcome::ok(match format_of(cfg, Format::Csv) {
        Format::Csv => {
            let mut body = String::from("phi_p,V_over_EJ\n");
            for (x, v) in cut.phi_p.iter().zip(&cut.v) {
                let _ = writeln!(body, "{},{}", csv_float(*x), csv_float(*v));
            }
            csv_report(cfg, &body)
        }
        Format::Json => json_report(cfg, "cut", json!({ "model": model, "cut": cut })),
    }))
}

/// Gap of the configured circuit at zero bias.
pub fn compute_gap(cfg: &RunConfig, params: &CircuitParams) -> Result<GapResult> {
    let model = cfg.solver.model.unwrap_or(Model::Reduced);
    let pot = potential(params, model, 0.0, 0.0);
    let mass = MassModel::capacitive(params.junctions.ec, params.junctions.ej_ratio)?;
    match cfg.solver.gap_dims {
        2 => {
            let n = cfg.solver.gap_points_2d;
            splitting_2d(
                pot.as_ref(),
                &SchrodingerGrid::phi_p(&mass, n)?,
                &SchrodingerGrid::phit_m(&mass, n)?,
            )
        }
        _ => tunneling_gap_1d(pot.as_ref(), &SchrodingerGrid::phi_p(&mass, cfg.solver.gap_points)?),
    }
}

pub fn cmd_gap(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.circuit_params()?;
    let gap = compute_gap(cfg, &params)?;
    let constants = cfg.constants()?;
    let delta_ghz = to_si(gap.delta, Quantity::Frequency, Some(&constants))? * 1e-9;
    let payload = json!({
        "model": cfg.solver.model.unwrap_or(Model::Reduced),
        "dims": cfg.solver.gap_dims,
        "gap": gap,
        "delta_ghz": delta_ghz,
    });
    match format_of(cfg, Format::Json) {
        Format::Json => Ok(Outcome::ok(json_report(cfg, "gap", payload))),
        Format::Csv => Err(no_csv("gap")),
    }
}

#[derive(Serialize)]
struct CurrentRow {
    label: WellLabel,
    ip1: f64,
    ip2: f64,
    ialpha: f64,
    ip1_na: f64,
    ip2_na: f64,
    ialpha_na: f64,
    mprime: i64,
}

fn current_rows(cfg: &RunConfig, params: &CircuitParams, search: &MinimaSearch) -> Result<Vec<CurrentRow>> {
    let constants = cfg.constants()?;
    search
        .minima
        .iter()
        .map(|m| {
            let c = loop_currents(params, m, Some(params.winding.mprime()))?;
            let si = c.to_si(&constants);
            Ok(CurrentRow {
                label: c.label,
                ip1: c.ip1,
                ip2: c.ip2,
                ialpha: c.ialpha,
                ip1_na: si.ip1_na,
                ip2_na: si.ip2_na,
                ialpha_na: si.ialpha_na,
                mprime: c.mprime,
            })
        })
        .collect()
}

pub fn cmd_currents(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.circuit_params()?;
    let model = cfg.solver.model.unwrap_or(Model::Full);
    let pot = potential(&params, model, 0.0, 0.0);
    let search = find_minima(pot.as_ref(), &seeds(cfg));
    let rows = current_rows(cfg, &params, &search)?;
    match format_of(cfg, Format::Json) {
        Format::Json => Ok(Outcome::ok(json_report(
            cfg,
            "currents",
            json!({ "model": model, "sign_convention": CURRENT_SIGN_NOTE, "states": rows }),
        ))),
        Format::Csv => {
            let mut body = String::from("label,ip1,ip2,ialpha,ip1_nA,ip2_nA,ialpha_nA\n");
            for r in &rows {
                let label = serde_json::to_value(r.label).expect("label");
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{}",
                    label.as_str().unwrap_or(""),
                    csv_float(r.ip1),
                    csv_float(r.ip2),
                    csv_float(r.ialpha),
                    csv_float(r.ip1_na),
                    csv_float(r.ip2_na),
                    csv_float(r.ialpha_na)
                );
            }
            Ok(Outcome::ok(csv_report(cfg, &body)))
        }
    }
}

pub fn cmd_coupling(cfg: &RunConfig) -> Result<Outcome> {
    let curve = g_curve(&cfg.coupling.ratios, &cfg.coupling.f_alphas);
    match format_of(cfg, Format::Csv) {
        Format::Csv => Ok(Outcome::ok(csv_report(cfg, &curve.to_csv()))),
        Format::Json => {
            let c = &cfg.circuit;
            let g = coupling_strength(c.ej_ratio, c.f_alpha, 1.0).ok();
            let resonator = match (&cfg.resonator, g) {
                (Some(r), Some(_)) => {
                    let alpha = alpha_param(c.ej_ratio, c.f_alpha)?;
                    let ib = r.bias_amplitude()?;
                    Some(json!({ "bias_amplitude": ib, "g_over_phi0": alpha * ib / (2.0 * PI) }))
                }
                _ => None,
            };
            Ok(Outcome::ok(json_report(
                cfg,
                "coupling",
                json!({ "curve": curve, "g_over_phi0_ib": g, "resonator": resonator }),
            )))
        }
    }
}

#[derive(Serialize)]
struct RabiSummary {
    expected_period: f64,
    measured_period_rwa: Option<f64>,
    max_population_difference: f64,
    max_top_fock_population: f64,
}

pub fn cmd_rabi(cfg: &RunConfig) -> Result<Outcome> {
    let q = &cfg.qed;
    let n = q.fock_cutoff;
    let rwa = build_rwa_h(q.delta, q.g, q.omega, n)?;
    let full = build_qubit_resonator_h(q.delta, q.g, q.omega, n)?;
    let period = PI / q.g;
    let samples = (q.periods * q.samples_per_period as f64).round() as usize;
    let times: Vec<f64> = (0..=samples)
        .map(|k| k as f64 * period / q.samples_per_period as f64)
        .collect();
    // |e, 0⟩
    let psi0 = basis_state(2 * n, n);
    let s_rwa = evolve_series(&rwa, &psi0, &times)?;
    let s_full = evolve_series(&full, &psi0, &times)?;
    check_fock_cutoff(s_rwa.iter().chain(&s_full), n)?;
    let p_rwa: Vec<f64> = s_rwa.iter().map(|s| qubit_population(s, 1)).collect();
    let p_full: Vec<f64> = s_full.iter().map(|s| qubit_population(s, 1)).collect();
    let top: Vec<f64> = s_full.iter().map(|s| top_fock_population(s, n)).collect();
    match format_of(cfg, Format::Csv) {
        Format::Csv => {
            let mut body = String::from("t,p_excited_rwa,p_excited_full,top_fock_full\n");
            for i in 0..times.len() {
                let _ = writeln!(
                    body,
                    "{},{},{},{}",
                    csv_float(times[i]),
                    csv_float(p_rwa[i]),
                    csv_float(p_full[i]),
                    csv_float(top[i])
                );
            }
            Ok(Outcome::ok(csv_report(cfg, &body)))
        }
        Format::Json => {
            let summary = RabiSummary {
                expected_period: period,
                measured_period_rwa: oscillation_period(&times, &p_rwa),
                max_population_difference: p_rwa
                    .iter()
                    .zip(&p_full)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
                max_top_fock_population: top.iter().copied().fold(0.0, f64::max),
            };
            Ok(Outcome::ok(json_report(cfg, "rabi", json!({ "summary": summary }))))
        }
    }
}

pub fn cmd_twoqubit(cfg: &RunConfig) -> Result<Outcome> {
    let p = cfg.two_qubit_params();
    let n = cfg.qed.fock_cutoff;
    let eff = dispersive_two_qubit_h(&p, n, cfg.two_qubit.force)?;
    let exact = tavis_cummings_h(&p, n)?;
    let s_eff = exchange_splitting(&eff)?;
    let s_exact = exchange_splitting(&exact)?;
    let j = p.exchange();
    let payload = json!({
        "params": p,
        "detunings": p.detunings(),
        "shifted_gaps": p.shifted_gaps(),
        "exchange_j": j,
        "dispersive_valid": p.dispersive_valid(),
        "splitting_effective": s_eff,
        "splitting_exact": s_exact,
        "relative_difference": (s_eff - s_exact).abs() / s_exact,
        "swap_period": if j != 0.0 { Some(PI / j.abs()) } else { None },
    });
    match format_of(cfg, Format::Json) {
        Format::Json => Ok(Outcome::ok(json_report(cfg, "twoqubit", payload))),
        Format::Csv => Err(no_csv("twoqubit")),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreEntry {
    pub name: String,
    pub reference: f64,
    pub computed: f64,
    /// Absolute tolerance, or the band `[reference, tolerance]` when `kind` is `band`.
    pub tolerance: f64,
    pub kind: &'static str,
    pub pass: bool,
}

impl ScoreEntry {
    fn abs(name: &str, reference: f64, computed: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            reference,
            computed,
            tolerance: tol,
            kind: "absolute",
            pass: (computed - reference).abs() <= tol,
        }
    }

    fn rel(name: &str, reference: f64, computed: f64, rel: f64) -> Self {
        Self {
            name: name.into(),
            reference,
            computed,
            tolerance: rel,
            kind: "relative",
            pass: (computed - reference).abs() <= rel * reference.abs(),
        }
    }

    fn band(name: &str, lo: f64, hi: f64, computed: f64) -> Self {
        Self {
            name: name.into(),
            reference: lo,
            computed,
            tolerance: hi,
            kind: "band",
            pass: (lo..=hi).contains(&computed),
        }
    }
}

/// Every quoted number of the reference circuit, recomputed from `cfg`.
pub fn scorecard(cfg: &RunConfig) -> Result<Vec<ScoreEntry>> {
    let params = cfg.circuit_params()?;
    let constants = cfg.constants()?;
    let full = TransformedPotential::new(params, Bias::None);
    let search = find_minima(&full, &seeds(cfg));
    let (down, up) = match (search.down(), search.up()) {
        (Some(d), Some(u)) => (d.clone(), u.clone()),
        _ => {
            return Err(GfqError::NoDoubleWell {
                argument: full.double_well_argument(),
            })
        }
    };
    let parts = full.parts(&[down.position[0], down.position[1], down.position[2], down.position[3]]);
    let mprime = params.winding.mprime();
    let cd = loop_currents(&params, &down, Some(mprime))?;
    let cu = loop_currents(&params, &up, Some(mprime))?;
    let sd = cd.to_si(&constants);
    let f = &params.flux;
    let j = &params.junctions;
    let gap = compute_gap(cfg, &params)?;
    let delta_ghz = to_si(gap.delta, Quantity::Frequency, Some(&constants))? * 1e-9;

    Ok(vec![
        ScoreEntry::rel("phi_p_minimum", 1.809, 0.5 * (up.phi_p - down.phi_p), 0.02),
        ScoreEntry::abs("u_jj_over_ej", -2.886, parts.josephson, 0.02),
        ScoreEntry::abs("u_ind_over_ej", 0.006, parts.inductive, 0.003),
        ScoreEntry::rel("trapping_current_reduced", 0.00123, cd.ip1.abs(), 0.03),
        ScoreEntry::abs(
            "trapping_current_sign_flip",
            0.0,
            (cd.ip1 + cu.ip1).abs(),
            0.03 * 0.00123,
        ),
        ScoreEntry::rel("alpha_current_reduced", 0.00022, cd.ialpha.abs(), 0.05),
        ScoreEntry::rel("trapping_current_na", 170.0, sd.ip1_na.abs(), 0.03),
        ScoreEntry::rel("alpha_current_na", 30.0, sd.ialpha_na.abs(), 0.03),
        ScoreEntry::abs("g_over_phi0_ib", 0.3, coupling_strength(j.ej_ratio, f.f_alpha, 1.0)?, 0.015),
        ScoreEntry::abs(
            "optimal_mprime",
            -2.0,
            optimal_mprime(f.f1, f.f2, f.f_alpha, params.inductance.lm_ratio()) as f64,
            0.0,
        ),
        ScoreEntry::band("delta_ghz", 0.3, 3.0, delta_ghz),
    ])
}

pub fn cmd_reproduce(cfg: &RunConfig) -> Result<Outcome> {
    let entries = scorecard(cfg)?;
    let failed: Vec<&str> = entries.iter().filter(|e| !e.pass).map(|e| e.name.as_str()).collect();
    let code = if failed.is_empty() { 0 } else { 1 };
    let text = match format_of(cfg, Format::Json) {
        Format::Json => json_report(
            cfg,
            "reproduce",
            json!({ "entries": entries, "passed": failed.is_empty(), "failed": failed }),
        ),
        Format::Csv => {
            let mut body = String::from("name,reference,computed,tolerance,kind,pass\n");
            for e in &entries {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    e.name,
                    csv_float(e.reference),
                    csv_float(e.computed),
                    csv_float(e.tolerance),
                    e.kind,
                    e.pass
                );
            }
            csv_report(cfg, &body)
        }
    };
    Ok(Outcome { text, code })
}
