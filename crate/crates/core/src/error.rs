use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible interference parameters: rate {rate} with burstiness {burstiness} needs p(1|0) = {required_p01} > 1")]
    InfeasibleInterference {
        rate: f64,
        burstiness: f64,
        required_p01: f64,
    },

    #[error("degenerate chain: {0}")]
    DegenerateChain(String),

    #[error("quadrature did not converge for bin pair ({from}, {to}); error estimate {error_estimate:e}")]
    Quadrature {
        from: usize,
        to: usize,
        error_estimate: f64,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("state cap of {cap} exceeded ({reached} states reached)")]
    Capacity { cap: usize, reached: usize },

    #[error("non-ergodic configuration: {0}")]
    Model(String),

    #[error("stationary solver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::InfeasibleInterference { .. }
            | Error::DegenerateChain(_)
            | Error::Config(_) => 2,
            Error::Quadrature { .. }
            | Error::Invariant(_)
            | Error::Model(_)
            | Error::Convergence { .. } => 3,
            Error::Capacity { .. } => 4,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
