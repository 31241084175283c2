use std::fmt;
use std::process::ExitCode;

use sympspec_core::Error;

/// Process exit status. The numeric values are a stable contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Violation = 1,
    Parse = 2,
    Validation = 3,
    Numerical = 4,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }

    /// The more severe of two outcomes; a violation outranks an error.
    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::Numerical => 1,
            Status::Validation => 2,
            Status::Parse => 3,
            Status::Violation => 4,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s.code())
    }
}

pub fn status_of(e: &Error) -> Status {
    match e {
        Error::Parse(_) => Status::Parse,
        Error::NotSquare { .. }
        | Error::DimensionMismatch { .. }
        | Error::OddDimension(_)
        | Error::NonFinite
        | Error::NotSymmetric { .. }
        | Error::NotSkewSymmetric { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::InvalidIndexSet(_)
        | Error::ChainHypothesis(_)
        | Error::FunctionalValidation { .. }
        | Error::InvalidArgument(_)
        | Error::NotSymplecticallyOrthonormal { .. }
        | Error::OutsideSpan { .. } => Status::Validation,
        _ => Status::Numerical,
    }
}

/// An error on its way to the process boundary.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self::new(Status::Validation, format!("{}: {e}", path.display()))
    }

    pub fn context(self, path: &std::path::Path) -> Self {
        Self::new(self.status, format!("{}: {}", path.display(), self.message))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::new(status_of(&e), e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;
