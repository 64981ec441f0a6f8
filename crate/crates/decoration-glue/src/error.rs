use thiserror::Error;
use ulam_core::UlamAddress;

/// Errors from block validation, gluing, certification, and the decoration
/// file format.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GlueError {
    /// A distance matrix violates the triangle inequality; the offending
    /// triple and the size of the violation are reported.
    #[error("triangle inequality violated on points ({a}, {b}, {c}): d({a},{c}) exceeds d({a},{b}) + d({b},{c}) by {excess:e}")]
    TriangleViolation {
        a: usize,
        b: usize,
        c: usize,
        excess: f64,
    },
    #[error("distance matrix is asymmetric at ({i}, {j})")]
    AsymmetricMatrix { i: usize, j: usize },
    #[error("distance matrix has a nonzero diagonal entry at {i}")]
    NonzeroDiagonal { i: usize },
    #[error("{what} index {index} out of range for a block with {points} points")]
    BadIndex {
        what: &'static str,
        index: usize,
        points: usize,
    },
    #[error("invalid {what}: {value}")]
    BadValue { what: &'static str, value: f64 },
    #[error("block graph is not connected (point {unreached} unreachable from the root)")]
    Disconnected { unreached: usize },
    #[error("handle ({address}, {point}) does not address a live block point")]
    DeadHandle { address: UlamAddress, point: usize },
    #[error("measure is not a probability measure: total mass {total}")]
    NotProbability { total: f64 },
    #[error("no certificate: {reason}")]
    Certification { reason: String },
    #[error("decoration file, line {line}: {reason}")]
    Format { line: usize, reason: String },
}
