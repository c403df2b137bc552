use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or precondition rejected a numeric argument.
    #[error("invalid {name} = {value}: {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The strategy/model combination is not defined.
    #[error("scheme {scheme:?}: {reason}")]
    InvalidScheme { scheme: String, reason: &'static str },

    /// A deterministic rate was requested for a Rayleigh-fading scheme.
    #[error("Rayleigh-fading rates are random; use the Monte Carlo estimators in `fading`")]
    RequiresMonteCarlo,

    /// A Monte Carlo estimator was handed a deterministic scheme.
    #[error("scheme {scheme} is deterministic; Monte Carlo estimation applies to Rayleigh fading only")]
    RequiresRayleigh { scheme: String },

    /// An iterative numeric procedure failed to converge.
    #[error("numeric failure in {context}: {detail}")]
    NumericFailure { context: &'static str, detail: String },

    /// Two regions were compared on different angle grids.
    #[error("angle grids differ: {0}")]
    GridMismatch(String),

    /// The quartic has no real root.
    #[error("quartic has no real root")]
    NoRealRoot,

    /// Malformed serialized input.
    #[error("malformed {format} input: {detail}")]
    MalformedInput { format: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
