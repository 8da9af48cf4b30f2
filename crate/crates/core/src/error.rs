use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("{model} response cannot be used for {operation}")]
    ModelMismatch {
        model: &'static str,
        operation: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero Matsubara frequency has no finite-frequency value; use the zero-mode branch")]
    ZeroFrequency,

    #[error(
        "Matsubara sum not converged after {n_terms} terms \
         (partial pressure {partial_pressure:e} Pa, partial energy {partial_energy:e} J/m^2, \
         tail estimate {tail_estimate:e})"
    )]
    NotConverged {
        n_terms: usize,
        partial_pressure: f64,
        partial_energy: f64,
        tail_estimate: f64,
    },

    #[error("logarithm argument {value:e} <= 0 at n = {n}, q_perp = {q_perp:e} 1/m (reflection sign convention broken)")]
    LogArgument { n: usize, q_perp: f64, value: f64 },

    #[error("RPA screening pole at n = {n}, q_perp = {q_perp:e} 1/m ({polarization})")]
    RpaPole {
        n: usize,
        q_perp: f64,
        polarization: &'static str,
    },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("degenerate energy gap: E0(Drude) and E0(plasma) coincide ({0:e} J/m^2)")]
    DegenerateGap(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Validation {
            field,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}
