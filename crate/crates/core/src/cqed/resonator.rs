use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{GfqError, Result};

/// Transmission-line resonator of length `L` with inductance `l_s` and capacitance `c`
/// per unit length. Units are the caller's (SI, or reduced with `ħ = 1`).
///
/// The bias current seen by the qubit is set either by the capacitor width `d`
/// (uniform-capacitance geometry) or by a lumped geometry factor `δ`, never both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorParams {
    pub length: f64,
    pub l_s: f64,
    pub c: f64,
    pub hbar: f64,
    pub d: Option<f64>,
    pub delta: Option<f64>,
}

impl ResonatorParams {
    pub fn new(length: f64, l_s: f64, c: f64, hbar: f64, d: Option<f64>, delta: Option<f64>) -> Result<Self> {
        let p = Self {
            length,
            l_s,
            c,
            hbar,
            d,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !(pos(self.length) && pos(self.l_s) && pos(self.c) && pos(self.hbar)) {
            return Err(GfqError::Domain("resonator length, l_s, c and hbar must be positive".into()));
        }
        if let Some(d) = self.d {
            if !(0.0..self.length).contains(&d) {
                return Err(GfqError::Domain(format!("capacitor width d = {d} must lie in [0, L)")));
            }
        }
        Ok(())
    }

    /// `v = 1/√(l_s c)`.
    pub fn velocity(&self) -> f64 {
        1.0 / (self.l_s * self.c).sqrt()
    }

    /// `ω_n = nπv/L`.
    pub fn mode_frequency(&self, n: u32) -> Result<f64> {
        if n < 1 {
            return Err(GfqError::Domain("mode index starts at 1".into()));
        }
        Ok(n as f64 * PI * self.velocity() / self.length)
    }

    /// `√(ħω_n / l_s L)`, the zero-point current scale of mode `n`.
    pub fn zero_point_current(&self, n: u32) -> Result<f64> {
        Ok((self.hbar * self.mode_frequency(n)? / (self.l_s * self.length)).sqrt())
    }

    /// Spatial profile of the current of mode `n` for `x ∈ [-L/2, L/2]`:
    /// `cos(nπx/L)` for odd `n`, `sin(nπx/L)` for even `n`.
    pub fn mode_shape(&self, n: u32, x: f64) -> Result<f64> {
        if n < 1 {
            return Err(GfqError::Domain("mode index starts at 1".into()));
        }
        if x.abs() > 0.5 * self.length {
            return Err(GfqError::Domain(format!("position {x} outside [-L/2, L/2]")));
        }
        let arg = n as f64 * PI * x / self.length;
        Ok(if n % 2 == 1 { arg.cos() } else { arg.sin() })
    }

    /// Coefficient of `-i(a_n - a_n†)` in the current operator at `x`.
    pub fn current_mode_amplitude(&self, n: u32, x: f64) -> Result<f64> {
        Ok(self.zero_point_current(n)? * self.mode_shape(n, x)?)
    }

    /// Bias-current amplitude `I_b` that mode `n` delivers to the qubit.
    pub fn bias_amplitude_for_mode(&self, n: u32) -> Result<f64> {
        let i0 = self.zero_point_current(n)?;
        match (self.d, self.delta) {
            (Some(d), None) => Ok(2.0 * i0 * (PI * d / self.length).sin()),
            (None, Some(delta)) => Ok(i0 * delta),
            (Some(_), Some(_)) => Err(GfqError::Config("set either d or delta, not both".into())),
            (None, None) => Err(GfqError::Config("one of d or delta must be set".into())),
        }
    }

    /// `I_b` of the second mode, which drives the qubit in the single-qubit setup.
    pub fn bias_amplitude(&self) -> Result<f64> {
        self.bias_amplitude_for_mode(2)
    }

    /// Qubit-mode coupling `g = α (Φ₀/2π) I_b` for mode `n`.
    pub fn coupling(&self, alpha: f64, phi0: f64, n: u32) -> Result<f64> {
        Ok(alpha * phi0 / (2.0 * PI) * self.bias_amplitude_for_mode(n)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(d: Option<f64>, delta: Option<f64>) -> ResonatorParams {
        ResonatorParams::new(PI, 1.0, 1.0, 1.0, d, delta).unwrap()
    }

    #[test]
    fn mode_frequencies() {
        let r = unit(None, Some(1.0));
        for n in 1..5 {
            assert!((r.mode_frequency(n).unwrap() - n as f64).abs() < 1e-15);
        }
        assert!(r.mode_frequency(0).is_err());
        let si = ResonatorParams::new(0.01, 1.0, 1e-16, 1.0, None, None).unwrap();
        assert!((si.mode_frequency(1).unwrap() - PI * 1e10).abs() < 1.0);
    }

    #[test]
    fn current_amplitudes() {
        let r = unit(None, Some(1.0));
        let l = r.length;
        assert_eq!(r.current_mode_amplitude(2, 0.0).unwrap(), 0.0);
        let top = r.zero_point_current(2).unwrap();
        assert!((r.current_mode_amplitude(2, l / 4.0).unwrap() - top).abs() < 1e-15);
        assert!(r.current_mode_amplitude(1, l / 2.0).unwrap().abs() < 1e-15);
        assert!(r.current_mode_amplitude(1, -l / 2.0).unwrap().abs() < 1e-15);
        assert!(r.current_mode_amplitude(1, l).is_err());
    }

    #[test]
    fn bias_amplitude_modes() {
        let r = unit(Some(0.0), None);
        assert_eq!(r.bias_amplitude().unwrap(), 0.0);
        let half = unit(Some(PI / 2.0), None);
        let i0 = half.zero_point_current(2).unwrap();
        assert!((half.bias_amplitude().unwrap() - 2.0 * i0).abs() < 1e-15);
        let d = 0.7;
        let by_d = unit(Some(d), None).bias_amplitude().unwrap();
        let by_delta = unit(None, Some(2.0 * (PI * d / PI).sin())).bias_amplitude().unwrap();
        assert!((by_d - by_delta).abs() < 1e-15);
        assert!(matches!(unit(Some(d), Some(1.0)).bias_amplitude(), Err(GfqError::Config(_))));
        assert!(matches!(unit(None, None).bias_amplitude(), Err(GfqError::Config(_))));
    }
}
