use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit_model::{
    optimal_mprime, CircuitParams, DriveParams, FluxBias, InductanceSet, JunctionEnergies, WindingNumbers,
};
use crate::cqed::{ResonatorParams, TwoQubitParams};
use crate::observables::PhysicalConstants;
use crate::{GfqError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Two-variable potential on the constraint surface.
    Reduced,
    /// Four-variable potential with finite loop stiffness.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitSection {
    pub f1: f64,
    pub f2: f64,
    pub f_alpha: f64,
    /// `n2 - n1`.
    pub m: i64,
    /// `n1 + n2`; the energetically preferred value when absent.
    pub mprime: Option<i64>,
    pub n: i64,
    pub ej_ratio: f64,
    pub ej_over_ec: f64,
    pub stiffness_loop: f64,
    pub stiffness_alpha: f64,
}

impl Default for CircuitSection {
    fn default() -> Self {
        Self {
            f1: 0.94,
            f2: 0.94,
            f_alpha: 0.2,
            m: 0,
            mprime: None,
            n: 1,
            ej_ratio: 2.0,
            ej_over_ec: 40.0,
            stiffness_loop: 1000.0,
            stiffness_alpha: 3000.0,
        }
    }
}

/// Physical scales used for SI output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UnitsSection {
    pub l_eff_ph: f64,
    pub ej_over_h_ghz: f64,
}

impl Default for UnitsSection {
    fn default() -> Self {
        Self {
            l_eff_ph: 15.0,
            ej_over_h_ghz: 200.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    /// Overrides the per-command default (full for `currents`, reduced elsewhere).
    pub model: Option<Model>,
    pub seeds: usize,
    pub grid_points: usize,
    pub cut_points: usize,
    pub gap_points: usize,
    pub gap_points_2d: usize,
    /// 1 or 2.
    pub gap_dims: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            model: None,
            seeds: 17,
            grid_points: 201,
            cut_points: 401,
            gap_points: 2001,
            gap_points_2d: 201,
            gap_dims: 1,
        }
    }
}

/// Single qubit coupled to one resonator mode, `ħ = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QedSection {
    pub delta: f64,
    pub g: f64,
    pub omega: f64,
    pub fock_cutoff: usize,
    /// Length of the `rabi` run in vacuum-Rabi periods `π/g`.
    pub periods: f64,
    pub samples_per_period: usize,
}

impl Default for QedSection {
    fn default() -> Self {
        Self {
            delta: 1.0,
            g: 0.01,
            omega: 1.0,
            fock_cutoff: 10,
            periods: 10.0,
            samples_per_period: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoQubitSection {
    pub delta_l: f64,
    pub delta_r: f64,
    pub g_l: f64,
    pub g_r: f64,
    pub omega1: f64,
    pub force: bool,
}

impl Default for TwoQubitSection {
    fn default() -> Self {
        Self {
            delta_l: 1.1,
            delta_r: 1.1,
            g_l: 0.005,
            g_r: 0.005,
            omega1: 1.0,
            force: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingSection {
    pub ratios: Vec<f64>,
    pub f_alphas: Vec<f64>,
}

impl Default for CouplingSection {
    fn default() -> Self {
        Self {
            ratios: vec![1.5, 2.0, 2.5],
            f_alphas: (0..=8).map(|i| i as f64 / 20.0).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub format: Option<Format>,
}

/// Everything a run depends on. Parsed from TOML; unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub circuit: CircuitSection,
    /// pH.
    pub inductance: InductanceSet,
    pub drive: DriveParams,
    pub units: UnitsSection,
    pub solver: SolverSection,
    pub qed: QedSection,
    pub two_qubit: TwoQubitSection,
    pub coupling: CouplingSection,
    /// Absent unless configured; `δ` has no default.
    pub resonator: Option<ResonatorParams>,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| GfqError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GfqError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Canonical TOML form, embedded in every output.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Parse an echo as embedded in CSV output (`# `-prefixed lines).
    pub fn from_csv_echo(csv: &str) -> Result<Self> {
        let text: String = csv
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| l.strip_prefix("# ").unwrap_or(l.trim_start_matches('#')))
            .filter(|l| !l.starts_with("gfq "))
            .map(|l| format!("{l}\n"))
            .collect();
        Self::from_toml(&text)
    }

    pub fn winding(&self) -> Result<WindingNumbers> {
        let c = &self.circuit;
        let mprime = c
            .mprime
            .unwrap_or_else(|| optimal_mprime(c.f1, c.f2, c.f_alpha, self.inductance.lm_ratio()));
        WindingNumbers::from_m_mprime(c.m, mprime, c.n).map_err(|e| match e {
            GfqError::Domain(msg) => GfqError::Config(msg),
            other => other,
        })
    }

    pub fn circuit_params(&self) -> Result<CircuitParams> {
        let c = &self.circuit;
        if !(c.ej_over_ec > 0.0 && c.ej_over_ec.is_finite()) {
            return Err(GfqError::Config("ej_over_ec must be positive".into()));
        }
        CircuitParams::new(
            self.inductance,
            FluxBias::new(c.f1, c.f2, c.f_alpha)?,
            self.winding()?,
            JunctionEnergies {
                ej_ratio: c.ej_ratio,
                ec: 1.0 / c.ej_over_ec,
                stiffness_loop: c.stiffness_loop,
                stiffness_alpha: c.stiffness_alpha,
            },
        )
    }

    pub fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.units.l_eff_ph * 1e-12, self.units.ej_over_h_ghz * 1e9)
    }

    pub fn two_qubit_params(&self) -> TwoQubitParams {
        let t = &self.two_qubit;
        TwoQubitParams {
            delta_l: t.delta_l,
            delta_r: t.delta_r,
            g_l: t.g_l,
            g_r: t.g_r,
            omega1: t.omega1,
        }
    }

    /// Check every section before any computation runs.
    pub fn validate(&self) -> Result<()> {
        let cfg = |e: GfqError| match e {
            GfqError::Domain(msg) => GfqError::Config(msg),
            other => other,
        };
        self.circuit_params().map_err(cfg)?;
        self.constants()?;
        let s = &self.solver;
        if s.seeds < 2 || s.grid_points < 32 || s.cut_points < 3 || s.gap_points < 101 || s.gap_points_2d < 101 {
            return Err(GfqError::Config(
                "solver sizes too small (seeds >= 2, grid_points >= 32, cut_points >= 3, gap points >= 101)".into(),
            ));
        }
        if !matches!(s.gap_dims, 1 | 2) {
            return Err(GfqError::Config("gap_dims must be 1 or 2".into()));
        }
        let q = &self.qed;
        if q.fock_cutoff < 5 {
            return Err(GfqError::Config("fock_cutoff must be at least 5".into()));
        }
        if !(q.delta >= 0.0 && q.g > 0.0 && q.omega >= 0.0 && q.periods > 0.0 && q.samples_per_period >= 4) {
            return Err(GfqError::Config(
                "qed needs delta, omega >= 0, g > 0, periods > 0, samples_per_period >= 4".into(),
            ));
        }
        let t = &self.two_qubit;
        if ![t.delta_l, t.delta_r, t.g_l, t.g_r, t.omega1].iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(GfqError::Config("two_qubit parameters must be finite and non-negative".into()));
        }
        if self.coupling.ratios.is_empty() || self.coupling.f_alphas.is_empty() {
            return Err(GfqError::Config("coupling grid is empty".into()));
        }
        if let Some(r) = &self.resonator {
            r.validate().map_err(cfg)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_reference_circuit() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.circuit_params().unwrap(), CircuitParams::reference());
    }

    #[test]
    fn echo_round_trips() {
        let mut c = RunConfig::default();
        c.drive.beta0 = -0.02;
        c.resonator = Some(ResonatorParams::new(1.0, 1.0, 1.0, 1.0, None, Some(0.5)).unwrap());
        assert_eq!(RunConfig::from_toml(&c.echo()).unwrap(), c);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("[circuit]\nf3 = 0.1\n").is_err());
        assert!(RunConfig::from_toml("[nonsense]\n").is_err());
        let c = RunConfig::from_toml("[circuit]\nf_alpha = 0.1\n").unwrap();
        assert_eq!(c.circuit.f_alpha, 0.1);
        assert_eq!(c.circuit.f1, 0.94);
    }

    #[test]
    fn parity_mismatch_is_config_error() {
        let mut c = RunConfig::default();
        c.circuit.mprime = Some(-1);
        assert!(matches!(c.validate(), Err(GfqError::Config(_))));
    }
}
