use thiserror::Error;

use crate::UlamAddress;

/// Errors for address parsing and plane-tree manipulation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UlamError {
    /// A serialized address could not be parsed.
    #[error("cannot parse address {text:?}: {reason}")]
    ParseAddress { text: String, reason: &'static str },
    /// An operation referenced a vertex outside the tree.
    #[error("address {address} is not a vertex of the tree")]
    NotInTree { address: UlamAddress },
    /// A vertex is present but its parent is missing.
    #[error("prefix closure broken at {address}: parent missing")]
    BrokenPrefixClosure { address: UlamAddress },
    /// Child indices of some vertex are not contiguous from 1.
    #[error("child indices of {address} are not contiguous: expected out-degree {expected}, found child set of size {found}")]
    BrokenContiguity {
        address: UlamAddress,
        expected: u32,
        found: u32,
    },
}
