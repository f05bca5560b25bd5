use std::path::PathBuf;

/// Everything a command can fail with, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] boolval::Error),
    #[error("statistical check failed: {0}")]
    Statistical(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 pass, 1 statistical failure, 2 usage or configuration error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Statistical(_) | CliError::Core(boolval::Error::SaturatedCoverage { .. }) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Statistical("x".into()).exit_code(), 1);
        assert_eq!(CliError::Core(boolval::Error::SaturatedCoverage { v2: 1.0 }).exit_code(), 1);
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(boolval::Error::MarginViolated { margin: 0.1 }).exit_code(), 2);
    }
}
