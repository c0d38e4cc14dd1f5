use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands disagree on a dimension.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A row or column index is outside `[0, bound)`.
    IndexOutOfRange { index: usize, bound: usize },
    /// Row `0` has zero Euclidean norm; such rows are rejected at construction.
    ZeroRow(usize),
    /// A matrix needs at least one row and one column.
    EmptyMatrix,
    /// The operation needs more rows than the matrix has.
    TooFewRows { needed: usize, found: usize },
    /// A configuration or generation parameter is outside its domain.
    InvalidParameter(String),
    /// A non-finite value appeared in the iterate.
    Diverged { iteration: u64 },
    /// A Krylov method hit a zero-curvature direction with a nonzero residual.
    Breakdown { iteration: u64 },
    /// A method or selector id could not be parsed.
    UnknownId(String),
    /// An internal solve did not reach its accuracy target.
    NoConvergence { what: &'static str, achieved: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch in {context}: expected {expected}, found {found}"
            ),
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
            Error::ZeroRow(i) => write!(f, "row {i} has zero norm"),
            Error::EmptyMatrix => f.write_str("matrix must have at least one row and one column"),
            Error::TooFewRows { needed, found } => {
                write!(f, "need at least {needed} rows, found {found}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Diverged { iteration } => {
                write!(f, "non-finite iterate at iteration {iteration}")
            }
            Error::Breakdown { iteration } => {
                write!(f, "zero curvature direction at iteration {iteration}")
            }
            Error::UnknownId(id) => write!(f, "unknown id `{id}`"),
            Error::NoConvergence { what, achieved } => {
                write!(f, "{what} did not converge (reached {achieved:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
