use thiserror::Error;

/// Errors surfaced by the library. Solver failures carry enough context to
/// identify the offending cell/user and the last iterate where applicable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse config file: {0}")]
    ConfigParse(String),

    #[error("could not place user {user} of cell {cell} after {attempts} attempts")]
    Placement {
        cell: usize,
        user: usize,
        attempts: usize,
    },

    #[error(
        "target SINR infeasible: lambda for user {user} of cell {cell} \
         reached {lambda:.3e} (cap {cap:.3e})"
    )]
    InfeasibleTarget {
        cell: usize,
        user: usize,
        lambda: f64,
        cap: f64,
    },

    #[error(
        "fixed-point iteration did not converge in {sweeps} sweeps \
         (last residual {residual:.3e})"
    )]
    InnerNonConverged {
        sweeps: usize,
        residual: f64,
        /// Last iterate, flat (cell, user) order.
        lambda: Vec<f64>,
    },

    #[error("{what} for cell {cell}, user {user} is singular or not positive definite")]
    NotPositiveDefinite {
        what: &'static str,
        cell: usize,
        user: usize,
    },

    #[error("precoder scaling system is singular")]
    SingularSigma,

    #[error(
        "negative precoder power tau[{index}] = {value:.3e}; \
         dual solution not converged or target infeasible"
    )]
    NegativeTau { index: usize, value: f64 },

    #[error("metric undefined: {0}")]
    EmptyMetric(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
