use frw_core::closedform::ClosedFormError;
use frw_core::model::ModelError;
use frw_core::numeric::NumericError;
use frw_core::specfun::SpecFunError;
use frw_core::validate::ValidateError;
use thiserror::Error;

/// Checks ran but at least one failed.
pub const EXIT_FAILED: u8 = 1;
/// Bad flags, parameters, files or a component error.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("parameters: {0}")]
    Model(#[from] ModelError),
    #[error("closed form: {0}")]
    ClosedForm(#[from] ClosedFormError),
    #[error("numerics: {0}")]
    Numeric(#[from] NumericError),
    #[error("hypergeometric: {0}")]
    SpecFun(#[from] SpecFunError),
    #[error("{0}")]
    Validate(#[from] ValidateError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}
