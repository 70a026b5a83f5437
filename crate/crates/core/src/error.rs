use thiserror::Error;

use crate::moves::RejectReason;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    /// The degenerate compression `[ii]` disconnects the surface.
    #[error("excluded move: i = j = {0}")]
    ExcludedMove(u32),

    #[error("move ({i},{j}) rejected: {reason}")]
    MoveRejected {
        i: u32,
        j: u32,
        reason: RejectReason,
    },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("oracle violation: {0}")]
    OracleViolation(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// Short machine-readable category, used in diagnostic records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidOperation(_) => "invalid-operation",
            Error::InvalidMove(_) => "invalid-move",
            Error::ExcludedMove(_) => "excluded-move",
            Error::MoveRejected { .. } => "move-rejected",
            Error::ResourceLimit(_) => "resource-limit",
            Error::OracleViolation(_) => "oracle-violation",
            Error::InternalConsistency(_) => "internal-consistency",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
