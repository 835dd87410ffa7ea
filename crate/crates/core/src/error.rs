use thiserror::Error;

/// Errors raised by the metrology routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    /// A symplectic eigenvalue sits at the vacuum floor, so the thermal exponent diverges.
    #[error("pure mode: symplectic eigenvalue {value} is within {tolerance:e} of 1")]
    PureMode { value: f64, tolerance: f64 },

    #[error("degenerate spectrum: {0} (jitter the inputs by ~1e-9 and retry)")]
    DegenerateSpectrum(String),

    #[error("fidelity {value} lies outside [0, 1] beyond tolerance")]
    FidelityOutOfRange { value: f64 },

    #[error("singular C block: |det C| = {0:e}")]
    SingularBlock(f64),

    #[error("divergent estimator: |sin 2phi| = {0:e}")]
    DivergentEstimator(f64),

    #[error("truncation deficit {deficit:e} exceeds tolerance {tolerance:e}")]
    Truncation { deficit: f64, tolerance: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
