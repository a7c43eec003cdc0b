//! Error type shared across the crate.

use num_complex::Complex64;

/// Errors produced by the numerical routines and the command-line driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the mathematical domain of the operation
    /// (e.g. an exponent p < 1, an empty grid, a Blaschke parameter
    /// outside [0, 1)).
    #[error("domain error: {0}")]
    Domain(String),

    /// An adaptive computation hit its resolution cap before the stage
    /// difference dropped below the requested tolerance. The last two
    /// inter-stage l1 discrepancies are reported so the caller can judge
    /// how far the run was from converging.
    #[error("{context}: not converged (last stage differences {:.3e}, {:.3e})", last_diffs.0, last_diffs.1)]
    NotConverged {
        context: String,
        last_diffs: (f64, f64),
    },

    /// A resolvent was requested at a point too close to the symbol's range.
    #[error("resolvent point {lambda} is within {min_distance:.3e} of the symbol range (floor {floor:.1e})")]
    NearSingular {
        lambda: Complex64,
        min_distance: f64,
        floor: f64,
    },

    /// A truncated series cannot meet the requested tail bound with the
    /// supplied cutoff; `required` is a cutoff that would suffice.
    #[error("{context}: truncation at {given} terms leaves tail {tail:.3e} > {budget:.1e}; need at least {required} terms")]
    TruncationTooShort {
        context: String,
        given: usize,
        required: usize,
        tail: f64,
        budget: f64,
    },

    /// Failure writing an output artifact from the command-line driver.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line driver: usage/domain errors
    /// exit 2, numerical failures exit 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
