use thiserror::Error;

/// Errors raised by the engine, its observables and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coincident particles: separation {distance:e} is below {min:e}")]
    Coincident { distance: f64, min: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),

    #[error("oracle refuses N = {n} (guardrail {limit})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("hitrate undefined: no triplets were traversed")]
    NoTraversal,

    #[error("wall time must be positive, got {0}")]
    NonPositiveWallTime(f64),

    #[error("kinetic energy is zero, cannot rescale velocities")]
    ZeroKinetic,

    #[error("interface fit did not converge after {iterations} iterations (residual {residual:e})")]
    FitDiverged { iterations: usize, residual: f64 },

    #[error("interface fit input rejected: {0}")]
    FitInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("step {step}: {source}")]
    AtStep {
        step: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Tags an error with the step at which it occurred.
    pub fn at_step(self, step: u64) -> Self {
        Error::AtStep { step, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
