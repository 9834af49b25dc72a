use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or input files.
    #[error("{0}")]
    Usage(String),

    /// A check ran and failed.
    #[error("{0}")]
    Failed(String),

    #[error(transparent)]
    Core(#[from] matpred::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use matpred::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
            CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                E::InvalidParameter(_)
                | E::Parse(_)
                | E::Io(_)
                | E::Csv(_)
                | E::IndexOutOfRange(_)
                | E::DimensionMismatch(_)
                | E::Domain(_) => 2,
                E::Invariant(_) | E::DualSolver { .. } | E::NoConvergence { .. } | E::NonFinite(_) => 1,
            },
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
