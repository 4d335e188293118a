use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_REJECTED: u8 = 2;
pub const EXIT_DISAGREEMENT: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent instance; the message carries the location.
    #[error("{0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] subinfo::Error),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        use subinfo::Error as E;
        match self {
            CliError::Invalid(_) | CliError::Io { .. } => EXIT_INVALID,
            CliError::Core(e) => match e {
                E::Structural { .. } | E::Rejected(_) => EXIT_REJECTED,
                E::ResourceLimit(_) => EXIT_RESOURCE,
                _ => EXIT_INVALID,
            },
        }
    }

    /// Violation report attached to a structural rejection, if any.
    pub fn structural_report(&self) -> Option<&subinfo::analysis::PropertyReport> {
        match self {
            CliError::Core(subinfo::Error::Structural { report, .. }) => report.as_deref(),
            _ => None,
        }
    }
}
