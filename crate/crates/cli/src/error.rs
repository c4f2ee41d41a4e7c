use std::fmt;

use asyncdyn_core::Error;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Parse = 1,
    Capacity = 2,
    Schedule = 3,
    SetArgument = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ExitKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    /// Classifies a core error raised while loading a network: dimension
    /// limits are capacity errors, everything else is a parse error.
    pub fn network(context: &str, err: Error) -> Self {
        match err {
            Error::DimensionOutOfRange { .. } => {
                CliError::new(ExitKind::Capacity, format!("{context}: {err}"))
            }
            Error::Parse(e) => CliError::new(ExitKind::Parse, format!("{context}:{e}")),
            _ => CliError::new(ExitKind::Parse, format!("{context}: {err}")),
        }
    }

    pub fn code(&self) -> u8 {
        self.kind as u8
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, CliError>;
