use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use gfq_core::circuit_model::{FluxBias, WindingNumbers};
use gfq_core::cli::{execute, Command, RunConfig};
use gfq_core::GfqError;

fn py_err(e: GfqError) -> PyErr {
    match e {
        GfqError::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Run a CLI subcommand on a TOML configuration (defaults when `None`).
/// Returns the report text and the exit code the CLI would use.
#[pyfunction]
#[pyo3(signature = (command, config=None))]
fn run(py: Python<'_>, command: &str, config: Option<&str>) -> PyResult<(String, i32)> {
    let command: Command = command.parse().map_err(py_err)?;
    let cfg = match config {
        Some(text) => RunConfig::from_toml(text).map_err(py_err)?,
        None => RunConfig::default(),
    };
    cfg.validate().map_err(py_err)?;
    let out = py.detach(|| execute(command, &cfg)).map_err(py_err)?;
    Ok((out.text, out.code))
}

/// Default configuration as TOML.
#[pyfunction]
fn default_config() -> String {
    RunConfig::default().echo()
}

/// `(phi_p, argument)` of the closed-form wells; raises when there is no double well.
#[pyfunction]
#[pyo3(signature = (ej_ratio, f_alpha, n=1))]
fn analytic_minima(ej_ratio: f64, f_alpha: f64, n: i64) -> PyResult<(f64, f64)> {
    let a = gfq_core::landscape::analytic_minima(ej_ratio, f_alpha, n).map_err(py_err)?;
    Ok((a.phi_p, a.argument))
}

#[pyfunction]
#[pyo3(signature = (phi_p, phit_m, ej_ratio=2.0, f1=0.94, f2=0.94, f_alpha=0.2, m=0, n=1, beta0=0.0))]
#[allow(clippy::too_many_arguments)]
fn v_reduced(
    phi_p: f64,
    phit_m: f64,
    ej_ratio: f64,
    f1: f64,
    f2: f64,
    f_alpha: f64,
    m: i64,
    n: i64,
    beta0: f64,
) -> PyResult<f64> {
    let flux = FluxBias::new(f1, f2, f_alpha).map_err(py_err)?;
    let wind = WindingNumbers::from_m_mprime(m, m, n).map_err(py_err)?;
    Ok(gfq_core::circuit_model::v_reduced(ej_ratio, &flux, &wind, phi_p, phit_m, beta0))
}

/// `g / (Φ₀ I_b)` times `phi0_ib`, in units of `E_J`.
#[pyfunction]
#[pyo3(signature = (ej_ratio, f_alpha, phi0_ib=1.0))]
fn coupling_strength(ej_ratio: f64, f_alpha: f64, phi0_ib: f64) -> PyResult<f64> {
    gfq_core::observables::coupling_strength(ej_ratio, f_alpha, phi0_ib).map_err(py_err)
}

#[pyfunction]
fn optimal_mprime(f1: f64, f2: f64, f_alpha: f64, lm_ratio: f64) -> i64 {
    gfq_core::circuit_model::optimal_mprime(f1, f2, f_alpha, lm_ratio)
}

#[pymodule]
fn gfq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_minima, m)?)?;
    m.add_function(wrap_pyfunction!(v_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_strength, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_mprime, m)?)?;
    Ok(())
}
