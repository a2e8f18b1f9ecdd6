use std::path::PathBuf;

use thiserror::Error;

use crate::estimators::EstimationError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("missing column `{column}` in {path}")]
    MissingColumn { path: PathBuf, column: String },

    #[error("malformed record {row_id}: {reason}")]
    MalformedRecord { row_id: String, reason: String },

    #[error("unresolvable country names in colonial coding: {}", .names.join(", "))]
    UnresolvedColonialNames { names: Vec<String> },

    #[error("duplicate colonial pair ({colony}, {coloniser})")]
    DuplicateColonialPair { colony: String, coloniser: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Estimation(#[from] EstimationError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv { path: path.into(), source }
    }
}
