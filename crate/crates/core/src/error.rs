use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a stated invariant. The message names the invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A matrix failed density-matrix validation.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    /// Adaptive integration could not proceed.
    #[error("integration failed after t = {last_good_time}: {reason}")]
    Integration { last_good_time: f64, reason: String },
    /// Linear-algebra failure (no null vector, singular system, ...).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A ratio with a vanishing denominator was requested.
    #[error("undefined value: {0}")]
    Undefined(String),
    /// Configuration text could not be parsed or resolved.
    #[error("config error: {0}")]
    Config(String),
    /// Trajectory run stopped early; `completed` trajectories finished.
    #[error("partial result after {completed} trajectories: {reason}")]
    Partial { completed: usize, reason: String },
}

impl Error {
    /// True for failures that originate in numerics rather than input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Integration { .. } | Error::Numerical(_) | Error::Undefined(_) | Error::Partial { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
