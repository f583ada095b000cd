use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    SchemaViolation { line: usize, reason: String },

    #[error("i/o failure: {0}")]
    IoFailure(#[from] io::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] ergmat_core::Error),

    /// A check or suite ran to completion and reported failure.
    #[error("{0}")]
    Failed(String),
}

impl Error {
    /// Process exit code: 2 for invalid input or parameters, 1 for runtime failures.
    pub fn exit_code(&self) -> u8 {
        use ergmat_core::Error as E;
        match self {
            Error::SchemaViolation { .. } | Error::Usage(_) => 2,
            Error::IoFailure(_) | Error::Failed(_) => 1,
            Error::Core(e) => match e {
                E::NoConvergence(_) | E::DegenerateInput { .. } | E::InconsistentMoments(_) => 1,
                E::NotHermitian { .. } | E::NotPositiveSemidefinite { .. } => 1,
                _ => 2,
            },
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::IoFailure(io::Error::other(e))
    }
}
