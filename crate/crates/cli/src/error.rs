use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] lstx::Error),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for quadrature that failed to converge, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(lstx::Error::NotConverged { .. }) => 2,
            _ => 1,
        }
    }
}
