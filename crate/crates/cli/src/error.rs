//! Error classification for exit codes: configuration problems exit 1,
//! data problems (unreadable/invalid inputs, no overlap, write failures)
//! exit 2.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }

    pub fn data(msg: impl fmt::Display) -> Self {
        CliError::Data(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<locdiag_core::trajectory::TrajectoryError> for CliError {
    fn from(e: locdiag_core::trajectory::TrajectoryError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<locdiag_core::faults::FaultError> for CliError {
    fn from(e: locdiag_core::faults::FaultError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<locdiag_core::window::AssessError> for CliError {
    fn from(e: locdiag_core::window::AssessError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<locdiag_core::histogram::HistogramError> for CliError {
    fn from(e: locdiag_core::histogram::HistogramError) -> Self {
        CliError::Data(e.to_string())
    }
}
