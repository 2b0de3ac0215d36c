//! Crate-wide error type.

use core::fmt;

/// Errors reported by grid construction, operators and the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter lies outside the admissible domain of an operation.
    Domain(&'static str),
    /// Two grid functions do not live on the same grid.
    GridMismatch,
    /// The grid has too few cells for the requested operation.
    GridTooSmall { min_cells: usize },
    /// An input value is NaN or infinite where a finite value is required.
    NonFinite(&'static str),
    /// A quotient or integrand is unbounded under the supplied parameters.
    Unbounded(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "parameter domain violation: {what}"),
            Error::GridMismatch => write!(f, "grid functions live on different grids"),
            Error::GridTooSmall { min_cells } => {
                write!(f, "grid too small: need at least {min_cells} cells")
            }
            Error::NonFinite(what) => write!(f, "non-finite value: {what}"),
            Error::Unbounded(what) => write!(f, "unbounded quantity: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
