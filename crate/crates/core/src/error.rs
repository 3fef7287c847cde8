use std::fmt;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::field::FieldError;
use crate::format::FormatError;
use crate::sensor::SensorError;
use crate::streamline::TraceError;

/// Invalid argument or configuration supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct UsageError(String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        UsageError(msg.into())
    }
}

/// Physically impossible arrangement (overlapping magnets, sensor plane through a source).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct GeometryError(pub String);

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or configuration (exit code 2).
    Usage,
    /// Numeric or domain failure such as a singularity (exit code 1).
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Sensor(#[from] SensorError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Usage(_) | Error::Io(_) => ErrorKind::Usage,
            Error::Format(_) => ErrorKind::Usage,
            Error::Field(FieldError::Usage(_)) => ErrorKind::Usage,
            Error::Trace(TraceError::Usage(_)) => ErrorKind::Usage,
            Error::Sensor(SensorError::Usage(_)) => ErrorKind::Usage,
            Error::Analysis(e) if e.is_usage() => ErrorKind::Usage,
            _ => ErrorKind::Numeric,
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::Usage => f.write_str("usage"),
            ErrorKind::Numeric => f.write_str("numeric"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
