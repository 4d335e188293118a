use thiserror::Error;

use crate::analysis::PropertyReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set mismatch: expected {expected} elements, found {found}")]
    GroundSetMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("{family}: precondition violated: {reason}")]
    Precondition {
        family: &'static str,
        reason: String,
    },

    #[error("{family} has no closed form for {measure}")]
    NoClosedForm {
        family: &'static str,
        measure: &'static str,
    },

    /// An objective failed a structural property the optimizer depends on.
    #[error("structural guard rejected the objective: {reason}")]
    Structural {
        reason: String,
        report: Option<Box<PropertyReport>>,
    },

    /// The requested problem is refused outright (e.g. NSMIMax).
    #[error("rejected: {0}")]
    Rejected(String),

    #[error("degenerate instance: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
