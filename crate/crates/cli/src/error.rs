use thiserror::Error;
use zecmac::estimator::EstimatorError;
use zecmac::mac::MacError;
use zecmac::uv::UvError;
use zecmac::zec::ZecError;

/// Failure of a command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("size limit: {0}")]
    Size(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Size(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<UvError> for CliError {
    fn from(e: UvError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MacError> for CliError {
    fn from(e: MacError) -> Self {
        match e {
            MacError::BlocklengthLimit { .. } | MacError::OutputSpaceTooLarge { .. } => CliError::Size(e.to_string()),
            MacError::Uv(e) => e.into(),
            e => CliError::Config(e.to_string()),
        }
    }
}

impl From<ZecError> for CliError {
    fn from(e: ZecError) -> Self {
        match e {
            ZecError::SearchTooLarge { estimate, limit } => CliError::Size(format!(
                "search space estimate {estimate} exceeds the limit {limit}; nothing was enumerated"
            )),
            ZecError::Internal(_) | ZecError::ChannelContract(_) => CliError::Internal(e.to_string()),
            ZecError::Mac(e) => e.into(),
            ZecError::Uv(e) => e.into(),
            e => CliError::Config(e.to_string()),
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::Numerical { .. } => CliError::Internal(e.to_string()),
            EstimatorError::Zec(e) => e.into(),
            e => CliError::Config(e.to_string()),
        }
    }
}
