use thiserror::Error;

/// Errors produced by the samplers and estimators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    /// A parameter fell outside its admissible range.
    #[error("invalid parameter `{name}` = {value}: requires {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// An estimator was asked to run on fewer data points than it can use.
    #[error("insufficient data for {what}: got {got}, need at least {need}")]
    InsufficientData {
        what: &'static str,
        got: usize,
        need: usize,
    },
    /// A stick-breaking prefix left too much mass unaccounted for.
    #[error("stick residual {residual:e} exceeds the allowed {limit:e}")]
    ResidualTooLarge { residual: f64, limit: f64 },
    /// An urn replacement matrix failed the balance or sign checks.
    #[error("invalid urn matrix: {reason}")]
    InvalidUrnMatrix { reason: &'static str },
}
