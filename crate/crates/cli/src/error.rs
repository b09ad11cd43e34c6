use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] falva_core::Error),
    #[error("direct minimization not converged after {iterations} iterations (gradient sup norm {gradient_norm:e})")]
    NotConverged { iterations: usize, gradient_norm: f64 },
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    /// Process exit status: 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        use falva_core::Error as E;
        match self {
            CliError::Validation(_) | CliError::Io { .. } => 2,
            CliError::Core(E::Parse(_) | E::Slot(_) | E::Shape(_) | E::UnsupportedDimension(_)) => 2,
            CliError::Core(_) | CliError::NotConverged { .. } => 3,
        }
    }

    /// `FALVA-ERR <code>: <message>` on one line.
    pub fn diagnostic(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("FALVA-ERR {}: {msg}", self.exit_code())
    }
}

impl From<falva_core::numcore::NumError> for CliError {
    fn from(e: falva_core::numcore::NumError) -> Self {
        CliError::Core(e.into())
    }
}
