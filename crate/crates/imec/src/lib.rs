//! Text formats, sampling experiments and the command-line front end for
//! [`imec_core`].

pub mod cli;
pub mod experiments;
pub mod format;
pub mod sampling;

/// Errors of the std-side tooling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] imec_core::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
