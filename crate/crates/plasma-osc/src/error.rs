//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum PlasmaError {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite input for {0}")]
    NonFinite(&'static str),

    /// A value violated its mathematical domain (e.g. C < 2).
    #[error("domain error: {0}")]
    Domain(String),

    /// The sampled data has C(rho) identically constant; the certifier and
    /// blow-up search do not apply to simple waves.
    #[error("initial data is a simple wave (C identically constant)")]
    SimpleWave,

    /// The integrator produced a non-finite state without a preceding
    /// q zero-crossing.
    #[error("integrator failure at theta = {theta}: non-finite state")]
    IntegratorFailure {
        theta: f64,
        /// Last valid state vector (rho, P, E, p_bar, q).
        last_state: [f64; 5],
    },

    /// A call violated an interface precondition (e.g. empty sample set).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, PlasmaError>;
