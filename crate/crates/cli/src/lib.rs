//! Command-line harness: scenario registry, ad-hoc queries over system
//! definition files, and JSON/text/CSV reporting.

pub mod app;
pub mod definition;
pub mod query;
pub mod report;
pub mod scenarios;

use indyn_core::error::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or definition files (exit 2).
    Usage(String),
    /// A library error raised while running (exit 1).
    Core(CoreError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parameter(_) | CoreError::NotInSpace(_) | CoreError::UnknownSystem(_) | CoreError::EmptyBall => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Core(other),
        }
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
