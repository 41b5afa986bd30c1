use thiserror::Error;

/// Errors raised by the circuit, landscape, spectrum and circuit-QED layers.
#[derive(Debug, Error)]
pub enum GfqError {
    /// An input outside the domain of the operation (zero inductance, mode index 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The reduced potential has a single well for these parameters.
    #[error("no double well: existence argument {argument:.6} (needs < 1 with odd n)")]
    NoDoubleWell { argument: f64 },

    /// Under a strong bias the two wells collapse into one.
    #[error("wells merged under bias {beta}")]
    WellsMerged { beta: f64 },

    #[error("dispersive regime not satisfied: detuning {detuning} < 10 x coupling {coupling}")]
    DispersiveInvalid { detuning: f64, coupling: f64 },

    #[error("eigensolver did not converge: {0}")]
    Eigensolver(String),

    #[error("norm drift {drift:e} exceeds integrator tolerance")]
    Integrator { drift: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GfqError> = std::result::Result<T, E>;
