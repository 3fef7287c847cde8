use std::fmt;

use fluxforge_core::ErrorKind;

/// A failure with its process exit code: 1 for numeric or domain failures,
/// 2 for usage and configuration errors.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl<E: Into<fluxforge_core::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        let e: fluxforge_core::Error = e.into();
        match e.kind() {
            ErrorKind::Usage => CliError::usage(e.to_string()),
            ErrorKind::Numeric => CliError::numeric(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
