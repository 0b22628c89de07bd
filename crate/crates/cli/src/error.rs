use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(onebit::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

// Domain errors come from parameters the user supplied.
impl From<onebit::Error> for CliError {
    fn from(e: onebit::Error) -> Self {
        match e {
            onebit::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other),
        }
    }
}
