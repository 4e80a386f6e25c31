use nilkilling::catalog::CatalogError;
use nilkilling::classify::ClassifyError;
use nilkilling::derivations::DerivationError;
use nilkilling::format::ParseError;
use nilkilling::killing::KillingError;
use nilkilling::liealg::{GramError, InternalInconsistency, ValidationError};
use nilkilling::oracle::OracleError;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("invalid algebra: {}", .0.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Gram(GramError),
    #[error("{0}")]
    Refused(String),
    /// A report is still printed, but the run counts as failed input.
    #[error("{message}")]
    Rejected { report: Value, message: String },
    #[error("internal assertion: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 2,
            _ => 1,
        }
    }
}

impl From<GramError> for CliError {
    fn from(e: GramError) -> Self {
        match e {
            GramError::Invalid(v) => CliError::Invalid(v),
            other => CliError::Gram(other),
        }
    }
}

impl From<KillingError> for CliError {
    fn from(e: KillingError) -> Self {
        match e {
            KillingError::DimensionMismatch { .. } | KillingError::NotSymmetric => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::NotKilling(_) => CliError::Usage(e.to_string()),
            ClassifyError::Killing(k) => k.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<DerivationError> for CliError {
    fn from(e: DerivationError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<InternalInconsistency> for CliError {
    fn from(e: InternalInconsistency) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => {
                CliError::Refused(format!("{e}; raise --oracle-cap to override"))
            }
            OracleError::Killing(k) => k.into(),
            OracleError::Classify(c) => c.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}
