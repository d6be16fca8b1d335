use std::path::PathBuf;

use catbell_core::Error as CoreError;

pub mod exit {
    pub const SUCCESS: u8 = 0;
    /// Bad flag, config file, parameter value or IO failure.
    pub const USAGE: u8 = 1;
    /// Degenerate cat state, or every point of a scan degenerate.
    pub const DEGENERATE: u8 = 2;
    /// `eval` found a CHSH violation.
    pub const VIOLATING: u8 = 3;
    /// A `verify` check failed.
    pub const VERIFY_FAILED: u8 = 4;
    /// Internal inconsistency: Tsirelson breach or failed certification.
    pub const INTERNAL: u8 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("--{key}: {message}")]
    Param { key: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("every grid point is a degenerate cat state")]
    AllDegenerate,

    #[error("verification failed at check `{name}`{}", detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default())]
    Verification {
        name: String,
        detail: Option<String>,
    },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn param(key: &str, message: impl Into<String>) -> Self {
        Self::Param {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Param { .. } | Self::Io { .. } | Self::Format { .. } => {
                exit::USAGE
            }
            Self::AllDegenerate => exit::DEGENERATE,
            Self::Verification { .. } => exit::VERIFY_FAILED,
            Self::Core(e) => match e {
                CoreError::DegenerateState { .. }
                | CoreError::DegenerateRegion
                | CoreError::EmptyScan => exit::DEGENERATE,
                CoreError::TsirelsonViolation { .. }
                | CoreError::CertificationFailed { .. }
                | CoreError::DimensionMismatch { .. } => exit::INTERNAL,
                CoreError::NonFinite { .. }
                | CoreError::CutoffTooSmall { .. }
                | CoreError::InvalidGrid(_)
                | CoreError::InvalidProblem(_) => exit::USAGE,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
