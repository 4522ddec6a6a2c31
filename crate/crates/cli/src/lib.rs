//! Command-line front end for `cmrank`.
//!
//! Exit codes: 0 success or agreement, 1 usage or input error, 2 criterion
//! and oracle disagree (or a constructed map fails verification), 3 the
//! truncation order was too low to decide.

pub mod args;
pub mod commands;
pub mod report;

use cmrank::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(field: &str, message: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: format!("{field}: {message}"),
        }
    }

    /// Attributes a library error to the input `field` when it is an input
    /// problem.
    pub fn from_input(field: &str, e: Error) -> Self {
        if exit_code(&e) == EXIT_USAGE {
            CliError::usage(field, e)
        } else {
            e.into()
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        Error::InvalidTruncation
        | Error::TooManyCoefficients { .. }
        | Error::Parse { .. }
        | Error::InvalidRim(_)
        | Error::MismatchedRims
        | Error::DegenerateProfile
        | Error::ConstraintViolated(_)
        | Error::ProfileMismatch(_)
        | Error::ExcludedParameter(_)
        | Error::NotApplicable(_) => EXIT_USAGE,
        _ => EXIT_DISAGREE,
    }
}
