//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An element literal or coordinate vector does not belong to the group.
    #[error("invalid element: {0}")]
    InvalidElement(String),

    /// Two subsets from different groups were combined.
    #[error("operands belong to different groups")]
    GroupMismatch,

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation requiring a sum-free input received one that is not.
    #[error("set is not sum-free")]
    NotSumFree,

    /// An enumeration was requested on a group larger than the configured bound.
    #[error("group order {order} exceeds configured bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },

    /// A search ran out of budget before proving its answer. Never silently
    /// converted into a result.
    #[error("search incomplete: budget exhausted after {nodes} nodes")]
    IncompleteSearch { nodes: u64 },

    /// No surjection onto a cyclic quotient carries the set into the interval
    /// blocks. Signals a violated premise or a bug; always surfaced.
    #[error("no special direction exists for the given set")]
    NoSpecialDirection,

    /// A computation contradicts a theorem this crate verifies. Reaching this
    /// on valid inputs is a bug worth a report.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}
