//! Command-line front end for `hvd-core`.
//!
//! Every failure maps to one exit code and one `hvd: error[kind]: message`
//! line on stderr:
//!
//! | code | kind |
//! |---|---|
//! | 0 | success |
//! | 1 | `check`: the diagram disagrees with the nearest-site oracle |
//! | 2 | `parse`: malformed document or arguments |
//! | 3 | `domain`: a point is outside its model |
//! | 4 | `dimension`: dimension not supported by the operation |
//! | 5 | `sqrt`: exact arithmetic requested on a path that needs irrational square roots |
//! | 6 | `duplicate`: repeated sites |
//! | 7 | `io`: file could not be read or written |
//! | 8 | `other` |

pub mod commands;
pub mod document;
pub mod render;

use hvd_core::Error;

pub use commands::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    CheckFailed(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Dimension(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::CheckFailed(_) => "check",
            CliError::Parse(_) => "parse",
            CliError::Dimension(_) => "dimension",
            CliError::Io(_) => "io",
            CliError::Other(_) => "other",
            CliError::Core(e) => match e.root() {
                Error::DomainViolation { .. }
                | Error::NumericalUnderflow(_)
                | Error::InvalidCurvature(_)
                | Error::ModelMismatch(..)
                | Error::CurvatureMismatch
                | Error::DegenerateSurface(_) => "domain",
                Error::ArityMismatch { .. } | Error::EmptySites => "parse",
                Error::DimensionUnsupported(_) | Error::NoExplicitGeometry => "dimension",
                Error::NotSquareRootFree(_) => "sqrt",
                Error::DuplicateSites(..) | Error::CoincidentSites(..) => "duplicate",
                _ => "other",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "check" => 1,
            "parse" => 2,
            "domain" => 3,
            "dimension" => 4,
            "sqrt" => 5,
            "duplicate" => 6,
            "io" => 7,
            _ => 8,
        }
    }

    /// The single stderr line for this error.
    pub fn report_line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("hvd: error[{}]: {}", self.kind(), msg)
    }
}
