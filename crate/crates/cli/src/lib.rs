//! Library side of the `sqrtx` command-line tool: matrix file I/O, the
//! subcommands, and the randomized verification run.

pub mod commands;
pub mod matrix_file;
pub mod verify;

use thiserror::Error;

pub use matrix_file::ParseError;

/// Errors surfaced by a subcommand, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Library(#[from] sqrtx::Error),
}

impl CliError {
    /// `2` usage and input errors, `3` not SPD, `5` failed perturbation
    /// gate, `1` anything else.
    pub fn exit_code(&self) -> i32 {
        use sqrtx::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(ParseError::Matrix(e)) | CliError::Library(e) => match e {
                E::NotPositiveDefinite { .. } => 3,
                E::GateFailed { .. } => 5,
                E::Empty
                | E::NotSquare { .. }
                | E::DimensionMismatch { .. }
                | E::NotSymmetric { .. }
                | E::NonFinite
                | E::OrderTooLarge { .. }
                | E::ZeroOrder
                | E::InvalidQuadrature(_) => 2,
                E::NoConvergence { .. } => 1,
            },
            CliError::Parse(_) => 2,
        }
    }
}

/// What a successful command prints, and the exit code it ends with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}
