use serde::{Deserialize, Serialize};

use crate::{GfqError, Result};

/// Kinetic, geometric and mutual inductances of the GFQ, in one arbitrary common unit.
///
/// Primed entries belong to the left/right trapping branches, `lt_*` to the central
/// branch, unprimed to each half of the α-junction (dc-SQUID) loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InductanceSet {
    pub l_k: f64,
    pub l_g: f64,
    pub lp_k: f64,
    pub lp_g: f64,
    pub lt_k: f64,
    pub lt_g: f64,
    pub l_m: f64,
    pub lp_m: f64,
}

impl InductanceSet {
    /// Reference set in pH: `L_eff = 15`, `L_eff/(L_K+L_g) = 3`, `L_M/(L_K+L_g) = 0.4`.
    pub fn reference() -> Self {
        Self {
            l_k: 1.0,
            l_g: 4.0,
            lp_k: 1.0,
            lp_g: 3.0,
            lt_k: 0.5,
            lt_g: 1.0,
            l_m: 2.0,
            lp_m: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.l_k, self.l_g, self.lp_k, self.lp_g, self.lt_k, self.lt_g, self.l_m, self.lp_m,
        ];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(GfqError::Domain("inductances must be finite and non-negative".into()));
        }
        if self.l_k <= 0.0 || self.lp_k <= 0.0 || self.lt_k <= 0.0 {
            return Err(GfqError::Domain("kinetic inductances must be strictly positive".into()));
        }
        if self.branch_effective() <= 0.0 {
            return Err(GfqError::Domain("L'_K + L'_g - L'_M must be positive".into()));
        }
        Ok(())
    }

    /// `L_eff = L_K + L_g + L'_K + L'_g + 2(L̃_K + L̃_g) + L_M + L'_M`.
    pub fn effective(&self) -> f64 {
        self.l_k
            + self.l_g
            + self.lp_k
            + self.lp_g
            + 2.0 * (self.lt_k + self.lt_g)
            + self.l_m
            + self.lp_m
    }

    /// Self inductance of one half of the α loop, `L_K + L_g`.
    pub fn alpha_half(&self) -> f64 {
        self.l_k + self.l_g
    }

    /// `L'_K + L'_g`.
    pub fn branch(&self) -> f64 {
        self.lp_k + self.lp_g
    }

    /// `L̃_K + L̃_g`.
    pub fn central(&self) -> f64 {
        self.lt_k + self.lt_g
    }

    /// `L'_K + L'_g - L'_M`, the inductance seen by the outer-loop circulating current.
    pub fn branch_effective(&self) -> f64 {
        self.branch() - self.lp_m
    }

    /// `L_M / (L_K + L_g)`.
    pub fn lm_ratio(&self) -> f64 {
        self.l_m / self.alpha_half()
    }

    /// Coefficient of `φ_p` in the I₀ coupling, `L'_K + L'_g + 2(L̃_K + L̃_g) + L'_M`.
    pub(crate) fn bias_phi_p_weight(&self) -> f64 {
        self.branch() + 2.0 * self.central() + self.lp_m
    }

    /// `L_K + L_g + L_M`.
    pub(crate) fn bias_central_weight(&self) -> f64 {
        self.alpha_half() + self.l_m
    }

    /// `L'_K + L'_g + L'_M`, the weight of the branch-bias coupling.
    pub(crate) fn branch_bias_weight(&self) -> f64 {
        self.branch() + self.lp_m
    }
}

impl Default for InductanceSet {
    fn default() -> Self {
        Self::reference()
    }
}

/// `L_eff` of an inductance set.
pub fn effective_inductance(ind: &InductanceSet) -> f64 {
    ind.effective()
}

/// External fluxes in units of `Φ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxBias {
    pub f1: f64,
    pub f2: f64,
    pub f_alpha: f64,
}

impl FluxBias {
    pub fn new(f1: f64, f2: f64, f_alpha: f64) -> Result<Self> {
        if !(f1.is_finite() && f2.is_finite() && f_alpha.is_finite()) {
            return Err(GfqError::Domain("fluxes must be finite".into()));
        }
        Ok(Self { f1, f2, f_alpha })
    }
}

/// Fluxoid winding integers `n1`, `n2` (trapping loops) and `n` (α loop).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingNumbers {
    pub n1: i64,
    pub n2: i64,
    pub n: i64,
}

impl WindingNumbers {
    /// Build from `m = n2 - n1` and `m' = n1 + n2`, which must share parity.
    pub fn from_m_mprime(m: i64, mprime: i64, n: i64) -> Result<Self> {
        if (m + mprime).rem_euclid(2) != 0 {
            return Err(GfqError::Domain(format!(
                "m = {m} and m' = {mprime} must have equal parity"
            )));
        }
        Ok(Self {
            n1: (mprime - m) / 2,
            n2: (mprime + m) / 2,
            n,
        })
    }

    pub fn m(&self) -> i64 {
        self.n2 - self.n1
    }

    pub fn mprime(&self) -> i64 {
        self.n1 + self.n2
    }
}

/// Junction energies and the two dimensionless loop stiffnesses, all in units of `E_J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JunctionEnergies {
    /// `Ẽ_J / E_J` for the branch junctions 3 and 4.
    pub ej_ratio: f64,
    /// Single-junction charging energy `E_C = e²/2C` of junctions 1 and 2.
    pub ec: f64,
    /// `Φ₀² / (4 L_eff E_J)`.
    pub stiffness_loop: f64,
    /// `Φ₀² / (4 (L_K + L_g) E_J)`.
    pub stiffness_alpha: f64,
}

impl JunctionEnergies {
    pub fn reference() -> Self {
        Self {
            ej_ratio: 2.0,
            ec: 1.0 / 40.0,
            stiffness_loop: 1000.0,
            stiffness_alpha: 3000.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.ej_ratio) && ok(self.ec)) {
            return Err(GfqError::Domain("junction energies must be positive".into()));
        }
        if !(ok(self.stiffness_loop) && ok(self.stiffness_alpha)) {
            return Err(GfqError::Domain("stiffnesses must be positive".into()));
        }
        Ok(())
    }
}

/// The full parameter record of the GFQ and its extra-junction variant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub inductance: InductanceSet,
    pub flux: FluxBias,
    pub winding: WindingNumbers,
    pub junctions: JunctionEnergies,
}

impl CircuitParams {
    pub fn new(
        inductance: InductanceSet,
        flux: FluxBias,
        winding: WindingNumbers,
        junctions: JunctionEnergies,
    ) -> Result<Self> {
        inductance.validate()?;
        junctions.validate()?;
        FluxBias::new(flux.f1, flux.f2, flux.f_alpha)?;
        Ok(Self {
            inductance,
            flux,
            winding,
            junctions,
        })
    }

    /// `f1 = f2 = 0.94`, `f_α = 0.2`, `m = 0`, `n = 1`, `m' = -2`, `Ẽ_J/E_J = 2`,
    /// `E_J/E_C = 40`, stiffnesses 1000 / 3000.
    pub fn reference() -> Self {
        Self {
            inductance: InductanceSet::reference(),
            flux: FluxBias {
                f1: 0.94,
                f2: 0.94,
                f_alpha: 0.2,
            },
            winding: WindingNumbers {
                n1: -1,
                n2: -1,
                n: 1,
            },
            junctions: JunctionEnergies::reference(),
        }
    }

    /// Replace the α-loop stiffness by `stiffness_loop · L_eff / (L_K + L_g)`, which
    /// is what a single `Φ₀²/4E_J` implies for these inductances.
    pub fn with_consistent_stiffness(mut self) -> Self {
        let ind = &self.inductance;
        self.junctions.stiffness_alpha =
            self.junctions.stiffness_loop * ind.effective() / ind.alpha_half();
        self
    }

    /// `Φ₀² / (4π² E_J)` in the inductance unit of the set, i.e. `L_eff · stiffness_loop / π²`.
    pub fn flux_energy_scale(&self) -> f64 {
        self.inductance.effective() * self.junctions.stiffness_loop / (std::f64::consts::PI.powi(2))
    }

    /// `Φ₀² / (4 (L'_K + L'_g) E_J)`, the stiffness of the extra-junction outer-loop term.
    pub fn stiffness_branch(&self) -> f64 {
        self.junctions.stiffness_loop * self.inductance.effective() / self.inductance.branch()
    }

    /// `m + f2 - f1`, the loop-constraint target.
    pub fn loop_target(&self) -> f64 {
        self.winding.m() as f64 + self.flux.f2 - self.flux.f1
    }

    /// `n + f_α`, the α-loop constraint target.
    pub fn alpha_target(&self) -> f64 {
        self.winding.n as f64 + self.flux.f_alpha
    }
}

/// Bias currents in reduced form `β = Φ₀ I / (2π E_J)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveParams {
    /// Bias through the α-junction loop (`I₀`).
    pub beta0: f64,
    /// Bias into the branch node (`I'₀`).
    pub beta_branch: f64,
}

impl DriveParams {
    /// Reduced wave vector `κ = k l / L_K` carried by a bias line for a given `β`.
    ///
    /// From `I = -Φ₀ κ / 2π` and `Φ₀²/E_J = 4 L_eff · stiffness_loop`.
    pub fn kappa_from_beta(params: &CircuitParams, beta: f64) -> f64 {
        -beta / params.flux_energy_scale()
    }

    pub fn beta_from_kappa(params: &CircuitParams, kappa: f64) -> f64 {
        -kappa * params.flux_energy_scale()
    }
}

/// Junction phases. `phip1`/`phip2` are the extra trapping-loop junctions of the
/// extra-junction circuit and stay zero for the plain model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
    pub phip1: f64,
    pub phip2: f64,
}

impl PhaseState {
    pub fn new(phi1: f64, phi2: f64, phi3: f64, phi4: f64) -> Self {
        Self {
            phi1,
            phi2,
            phi3,
            phi4,
            phip1: 0.0,
            phip2: 0.0,
        }
    }

    pub fn raw(&self) -> [f64; 4] {
        [self.phi1, self.phi2, self.phi3, self.phi4]
    }

    /// `φ₁ + φ₂ + 2φ₃ + 2φ₄`.
    pub fn loop_sum(&self) -> f64 {
        self.phi1 + self.phi2 + 2.0 * self.phi3 + 2.0 * self.phi4
    }
}

/// `φ_{p,m} = (φ₁ ± φ₂)/2`, `φ̃_{p,m} = (φ₃ ± φ₄)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TransformedPhases {
    pub phi_p: f64,
    pub phi_m: f64,
    pub phit_p: f64,
    pub phit_m: f64,
}

impl From<&PhaseState> for TransformedPhases {
    fn from(s: &PhaseState) -> Self {
        Self {
            phi_p: 0.5 * (s.phi1 + s.phi2),
            phi_m: 0.5 * (s.phi1 - s.phi2),
            phit_p: 0.5 * (s.phi3 + s.phi4),
            phit_m: 0.5 * (s.phi3 - s.phi4),
        }
    }
}

impl From<&TransformedPhases> for PhaseState {
    fn from(t: &TransformedPhases) -> Self {
        PhaseState::new(
            t.phi_p + t.phi_m,
            t.phi_p - t.phi_m,
            t.phit_p + t.phit_m,
            t.phit_p - t.phit_m,
        )
    }
}
