use decoration_glue::GlueError;
use distributions::DistError;
use growth_models::GrowthError;
use thiserror::Error;
use ulam_core::UlamError;

/// Errors from continuum block samplers and gluing constructions.
#[derive(Debug, Error)]
pub enum LimitError {
    #[error("invalid parameter {name} = {value}: requires {constraint}")]
    Parameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid input {what}: {detail}")]
    Input { what: &'static str, detail: String },

    #[error("resolution too coarse for {what}: {detail}")]
    Resolution { what: &'static str, detail: String },

    #[error(
        "contraction condition violated for the {law} law: estimated \
         E[sum_j P_j^(p*beta)] = {estimate} is not < 1"
    )]
    ContractionViolated { law: &'static str, estimate: f64 },

    #[error("geometry mismatch: {detail}")]
    Geometry { detail: &'static str },

    #[error(transparent)]
    Dist(#[from] DistError),

    #[error(transparent)]
    Growth(#[from] GrowthError),

    #[error(transparent)]
    Glue(#[from] GlueError),

    #[error(transparent)]
    Ulam(#[from] UlamError),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("provenance sidecar: {0}")]
    Sidecar(#[from] serde_json::Error),
}
