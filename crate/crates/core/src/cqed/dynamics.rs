use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operator::OperatorMatrix;
use crate::{GfqError, Result};

/// Norm drift beyond which an evolution is rejected.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;
/// Population of the highest Fock level beyond which the cutoff is too small.
pub const TOP_FOCK_LIMIT: f64 = 1e-6;
/// Minimum number of piecewise-constant steps per drive period.
pub const MIN_STEPS_PER_PERIOD: usize = 200;

fn check_state(state: &DVector<Complex64>, dim: usize) -> Result<()> {
    if state.len() != dim {
        return Err(GfqError::Domain(format!("state has length {}, operator has dimension {dim}", state.len())));
    }
    if (state.norm() - 1.0).abs() > NORM_DRIFT_LIMIT {
        return Err(GfqError::Domain(format!("initial state norm {} is not 1", state.norm())));
    }
    Ok(())
}

fn check_norm(state: &DVector<Complex64>) -> Result<()> {
    let drift = (state.norm() - 1.0).abs();
    if drift > NORM_DRIFT_LIMIT {
        Err(GfqError::Integrator { drift })
    } else {
        Ok(())
    }
}

/// Basis state `index` of a space of dimension `dim`.
pub fn basis_state(dim: usize, index: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

/// `exp(-i H t)` for Hermitian `H`, via its eigendecomposition.
pub struct Propagator {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        h.require_hermitian()?;
        let (values, vectors) = h.eigh();
        Ok(Self { values, vectors })
    }

    pub fn apply(&self, state: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let mut c = self.vectors.adjoint() * state;
        for (ci, e) in c.iter_mut().zip(&self.values) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        &self.vectors * c
    }

    pub fn matrix(&self, t: f64) -> DMatrix<Complex64> {
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|e| Complex64::from_polar(1.0, -e * t)),
        ));
        &self.vectors * phases * self.vectors.adjoint()
    }
}

/// Evolve `state` under a time-independent `H` for time `t`, in steps of `dt`
/// (each step exact). `dt = None` takes a single step.
pub fn time_evolve(h: &OperatorMatrix, state: &DVector<Complex64>, t: f64, dt: Option<f64>) -> Result<DVector<Complex64>> {
    check_state(state, h.dim())?;
    let prop = Propagator::new(h)?;
    let out = match dt {
        None => prop.apply(state, t),
        Some(dt) => {
            if !(dt > 0.0) {
                return Err(GfqError::Domain("time step must be positive".into()));
            }
            let steps = (t.abs() / dt).ceil().max(1.0) as usize;
            let u = prop.matrix(t / steps as f64);
            let mut s = state.clone();
            for _ in 0..steps {
                s = &u * s;
            }
            s
        }
    };
    check_norm(&out)?;
    Ok(out)
}

/// States at each of `times` under a time-independent `H`.
pub fn evolve_series(h: &OperatorMatrix, state: &DVector<Complex64>, times: &[f64]) -> Result<Vec<DVector<Complex64>>> {
    check_state(state, h.dim())?;
    let prop = Propagator::new(h)?;
    times
        .iter()
        .map(|&t| {
            let s = prop.apply(state, t);
            check_norm(&s)?;
            Ok(s)
        })
        .collect()
}

/// `H(t) = H₀ + f(t) V` with a periodic drive envelope of angular frequency `omega`.
pub struct DrivenHamiltonian<'a> {
    pub h0: &'a OperatorMatrix,
    pub v: &'a OperatorMatrix,
    pub envelope: &'a (dyn Fn(f64) -> f64 + Sync),
    pub omega: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<Complex64>>,
    pub max_norm_drift: f64,
}

/// Piecewise-constant evolution: `H` is frozen at each step midpoint and exponentiated
/// exactly. Steps are at most a `1/steps_per_period` fraction of the drive period
/// (`steps_per_period ≥ 200`). States are recorded every `record_every` steps.
pub fn evolve_driven(
    h: &DrivenHamiltonian,
    state: &DVector<Complex64>,
    t_end: f64,
    steps_per_period: usize,
    record_every: usize,
) -> Result<Trajectory> {
    check_state(state, h.h0.dim())?;
    if h.v.dim() != h.h0.dim() {
        return Err(GfqError::Domain("drive operator dimension mismatch".into()));
    }
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(GfqError::Domain(format!(
            "at least {MIN_STEPS_PER_PERIOD} steps per drive period are required"
        )));
    }
    if !(h.omega > 0.0 && t_end >= 0.0) {
        return Err(GfqError::Domain("drive frequency must be positive and t_end non-negative".into()));
    }
    h.v.require_hermitian()?;
    let period = 2.0 * std::f64::consts::PI / h.omega;
    let steps = ((t_end / period) * steps_per_period as f64).ceil().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let record_every = record_every.max(1);

    let mut s = state.clone();
    let mut out = Trajectory {
        times: vec![0.0],
        states: vec![s.clone()],
        max_norm_drift: 0.0,
    };
    for step in 0..steps {
        let tm = (step as f64 + 0.5) * dt;
        let f = (h.envelope)(tm);
        let hs = OperatorMatrix {
            data: &h.h0.data + &h.v.data * Complex64::new(f, 0.0),
            factors: h.h0.factors.clone(),
        };
        s = Propagator::new(&hs)?.apply(&s, dt);
        let drift = (s.norm() - 1.0).abs();
        out.max_norm_drift = out.max_norm_drift.max(drift);
        if drift > NORM_DRIFT_LIMIT {
            return Err(GfqError::Integrator { drift });
        }
        if (step + 1) % record_every == 0 || step + 1 == steps {
            out.times.push((step + 1) as f64 * dt);
            out.states.push(s.clone());
        }
    }
    Ok(out)
}

/// `|⟨index|ψ⟩|²`.
pub fn population(state: &DVector<Complex64>, index: usize) -> f64 {
    state[index].norm_sqr()
}

/// Probability that the qubit factor (leading, dimension 2) is in `|q⟩`.
pub fn qubit_population(state: &DVector<Complex64>, q: usize) -> f64 {
    let n = state.len() / 2;
    (q * n..(q + 1) * n).map(|i| state[i].norm_sqr()).sum()
}

/// Population of the highest Fock level when the mode is the last tensor factor.
pub fn top_fock_population(state: &DVector<Complex64>, cutoff: usize) -> f64 {
    state
        .iter()
        .enumerate()
        .filter(|(i, _)| i % cutoff == cutoff - 1)
        .map(|(_, z)| z.norm_sqr())
        .sum()
}

/// Error when any state leaks more than [`TOP_FOCK_LIMIT`] into the top Fock level.
pub fn check_fock_cutoff<'a>(states: impl IntoIterator<Item = &'a DVector<Complex64>>, cutoff: usize) -> Result<()> {
    let worst = states
        .into_iter()
        .map(|s| top_fock_population(s, cutoff))
        .fold(0.0, f64::max);
    if worst > TOP_FOCK_LIMIT {
        Err(GfqError::Domain(format!(
            "Fock cutoff {cutoff} too small: top-level population {worst:.2e}"
        )))
    } else {
        Ok(())
    }
}

/// Mean spacing of successive maxima of a sampled signal, refined by parabolic
/// interpolation. `None` if fewer than two interior maxima are present.
pub fn oscillation_period(times: &[f64], signal: &[f64]) -> Option<f64> {
    let mut peaks = Vec::new();
    for i in 1..signal.len().saturating_sub(1) {
        let (a, b, c) = (signal[i - 1], signal[i], signal[i + 1]);
        if b > a && b >= c {
            let denom = a - 2.0 * b + c;
            let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            let h = times[i + 1] - times[i];
            peaks.push(times[i] + shift * h);
        }
    }
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cqed::hamiltonians::{build_qubit_resonator_h, sigma_x, sigma_z};
    use crate::cqed::operator::BasisFactor;

    fn qubit_op(m: DMatrix<Complex64>) -> OperatorMatrix {
        OperatorMatrix::new(m, vec![BasisFactor::qubit("q")]).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let h = build_qubit_resonator_h(1.0, 0.1, 1.0, 5).unwrap();
        let s = basis_state(10, 6);
        let out = time_evolve(&h, &s, 0.0, None).unwrap();
        assert!((out - s).norm() < 1e-14);
    }

    #[test]
    fn diagonal_h_keeps_populations() {
        let h = build_qubit_resonator_h(1.0, 0.0, 1.3, 5).unwrap();
        let mut s = DVector::from_element(10, Complex64::new(0.0, 0.0));
        s[1] = Complex64::new(0.6, 0.0);
        s[7] = Complex64::new(0.0, 0.8);
        let out = time_evolve(&h, &s, 17.3, Some(0.01)).unwrap();
        assert!((population(&out, 1) - 0.36).abs() < 1e-12);
        assert!((population(&out, 7) - 0.64).abs() < 1e-12);
    }

    #[test]
    fn driven_qubit_rabi() {
        let delta = 1.0;
        let g = 0.02 * delta;
        let h0 = qubit_op(sigma_z() * Complex64::new(0.5 * delta, 0.0));
        let v = qubit_op(sigma_x());
        let env = move |t: f64| g * (delta * t).sin();
        let drive = DrivenHamiltonian {
            h0: &h0,
            v: &v,
            envelope: &env,
            omega: delta,
        };
        let t_end = std::f64::consts::PI / g;
        let traj = evolve_driven(&drive, &basis_state(2, 0), t_end, 200, 200).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let expect = (0.5 * g * t).sin().powi(2);
            assert!((population(s, 1) - expect).abs() < 0.02);
        }
        assert!(traj.max_norm_drift < 1e-10);
    }

    #[test]
    fn coarse_drive_rejected() {
        let h0 = qubit_op(sigma_z());
        let env = |_: f64| 0.0;
        let d = DrivenHamiltonian {
            h0: &h0,
            v: &h0,
            envelope: &env,
            omega: 1.0,
        };
        assert!(evolve_driven(&d, &basis_state(2, 0), 1.0, 100, 1).is_err());
    }

    #[test]
    fn period_of_sampled_cosine() {
        let t: Vec<f64> = (0..2000).map(|i| i as f64 * 0.01).collect();
        let s: Vec<f64> = t.iter().map(|t| (2.0 * t).cos()).collect();
        let p = oscillation_period(&t, &s).unwrap();
        assert!((p - std::f64::consts::PI).abs() < 1e-5);
    }
}
