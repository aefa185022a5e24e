use thiserror::Error;

/// Errors surfaced by every stage of the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("perturbation order must be at least {min}, got {got}")]
    InvalidOrder { got: usize, min: usize },

    #[error("dimension must be positive, got {0}")]
    NonPositiveDimension(String),

    #[error("trial frequency must be positive, got {0}")]
    NonPositiveTrialFrequency(String),

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: String },

    #[error("requested order {requested} exceeds available series order {available}")]
    OrderExceedsSeries { requested: usize, available: usize },

    #[error("no admissible root: neither the first nor the second derivative has a positive real zero at order {order}")]
    NoAdmissibleRoot { order: usize },

    #[error("leading large-D stationarity condition has no positive real root at order {order}")]
    NoLeadingRoot { order: usize },

    #[error("truncation {requested} exceeds the solved range {available}")]
    TruncationOutOfRange { requested: usize, available: usize },

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("sequence orders must be consecutive")]
    NonContiguousSequence,

    #[error("deviation at N = {order} is below the precision floor; cannot take its logarithm")]
    DeviationBelowFloor { order: usize },

    #[error("nonlinear fit did not converge after {iterations} iterations (last rate {last_rate})")]
    FitNotConverged { iterations: usize, last_rate: String },

    #[error("vanishing denominator in {integral}: factor `{factor}` is not positive")]
    VanishingDenominator { integral: &'static str, factor: String },

    #[error("auxiliary frequency undefined: omega^2 + 4 s = {0} is not positive")]
    UndefinedFrequency(String),

    #[error("extremization of the effective potential failed at coupling {coupling}: {reason}")]
    ExtremizationFailed { coupling: String, reason: String },

    #[error("node-count bracketing failed: {0}")]
    Bracketing(String),

    #[error("boundary amplitude {amplitude:e} exceeds {limit:e}; x_max is too small")]
    BoundaryAmplitude { amplitude: f64, limit: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reference data: {0}")]
    Reference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
