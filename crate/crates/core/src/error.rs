//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A point lies outside the declared domain.
    #[error("point outside domain: {0}")]
    Domain(String),

    /// All probed derivatives at a critical point were below threshold.
    #[error("order of vanishing at y = {y:.12} is indeterminate (all derivatives up to {probed} below threshold)")]
    IndeterminateOrder { y: f64, probed: u32 },

    /// An SDE step could not be accepted after maximal substep refinement.
    #[error("trajectory integration failed at tau = {tau:.6e}")]
    Integration { tau: f64 },

    /// NaN or overflow in a deterministic solve.
    #[error("numerical instability: {0}")]
    Instability(String),

    /// A mesh or grid is too coarse for the requested data.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// A quadrature region does not cover the datum support.
    #[error("quadrature coverage: {0}")]
    Coverage(String),

    /// A decay curve never reached the requested threshold.
    #[error("horizon too short: threshold not reached by t = {horizon}; extend to roughly t = {required:.3e}")]
    HorizonTooShort { horizon: f64, required: f64 },

    /// Too few sweep points, or too narrow a kappa span, for a rate fit.
    #[error("insufficient sweep: {0}")]
    InsufficientSweep(String),

    /// A bound check has no admissible times.
    #[error("empty validity window for bound check ({0})")]
    EmptyValidityWindow(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code category: 2 validation, 3 numerical, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_)
            | Error::Domain(_)
            | Error::Coverage(_)
            | Error::InsufficientSweep(_) => 2,
            Error::IndeterminateOrder { .. }
            | Error::Integration { .. }
            | Error::Instability(_)
            | Error::Resolution(_)
            | Error::HorizonTooShort { .. }
            | Error::EmptyValidityWindow(_) => 3,
            Error::Io(_) => 4,
        }
    }
}
