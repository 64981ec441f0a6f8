//! Error type shared by all growth processes.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("invalid parameter {name}: {value} (must satisfy {constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("invalid seed graph: {reason}")]
    InvalidSeed { reason: String },
    #[error("state does not match the expected construction: {reason}")]
    WrongState { reason: String },
    #[error("insufficient data for {what}: got {got}, need {need}")]
    InsufficientData {
        what: &'static str,
        got: usize,
        need: usize,
    },
    #[error("fitness sequence rejected: {reason}")]
    FitnessRejected { reason: String },
    #[error("internal invariant broken: {reason}")]
    Internal { reason: String },
    #[error(transparent)]
    Glue(#[from] decoration_glue::GlueError),
}
