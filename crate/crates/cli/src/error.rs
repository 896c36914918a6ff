use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: input is not valid UTF-8", path.display())]
    Encoding { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Core {
        path: PathBuf,
        #[source]
        source: mealy_core::Error,
    },

    #[error("{}: no state named `{name}`", path.display())]
    UnknownState { path: PathBuf, name: String },

    #[error("{}: α({n}) is {counted} by path counting but {enumerated} by enumeration", path.display())]
    OracleMismatch {
        path: PathBuf,
        n: usize,
        counted: String,
        enumerated: String,
    },

    #[error("{}: exact index unavailable: {reason}", path.display())]
    ExactUnavailable { path: PathBuf, reason: String },
}

impl CliError {
    /// 1 oracle disagreement, 2 bad input, 4 resource cap.
    pub fn exit_code(&self) -> i32 {
        use mealy_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Encoding { .. } | CliError::UnknownState { .. } => 2,
            CliError::OracleMismatch { .. } => 1,
            CliError::ExactUnavailable { .. } => 4,
            CliError::Core { source, .. } => match source {
                E::SubsetBlowup { .. }
                | E::BudgetExceeded { .. }
                | E::NoConvergence { .. }
                | E::StateBlowup { .. } => 4,
                E::InfiniteCosts => 1,
                _ => 2,
            },
        }
    }
}
