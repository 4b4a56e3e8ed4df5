use thiserror::Error;

/// Errors produced by the recovery library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The multiplier search for the noise-ball projection could not bracket a root.
    #[error("root-find failed to bracket: residual {residual:e} exceeds radius {delta:e} at multiplier {multiplier:e}")]
    RootFind {
        residual: f64,
        delta: f64,
        multiplier: f64,
    },

    /// Matrix pencil fit did not reproduce the input.
    #[error("matrix pencil re-synthesis residual {residual:e} above tolerance {tolerance:e}")]
    IllConditionedPencil { residual: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension {
            context,
            expected,
            actual,
        })
    }
}
