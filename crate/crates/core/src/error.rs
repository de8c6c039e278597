use thiserror::Error;

/// Errors raised by the phase-space engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A symbolic field outgrew its term or degree cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An input lies outside the domain of an operation (off-shell momentum, m = 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed arguments (non-antisymmetric generator, bad grid spec, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A grid lacks an axis the operation needs.
    #[error("grid error: {0}")]
    Grid(String),

    /// The anticommutator constraint could not be satisfied within the abort threshold.
    #[error("consistency residual {residual:e} exceeds threshold {threshold:e} at step {step}")]
    Consistency {
        step: usize,
        residual: f64,
        threshold: f64,
    },

    /// Explicit stepping became unstable (relative update per step above one).
    #[error("CFL violation at step {step}: |rhs|*dt/|W| = {ratio:e}")]
    Cfl { step: usize, ratio: f64 },

    #[error("serialization error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
