//! Crate-wide error type.

use core::fmt;

/// Errors reported by geometry, energy, and verification operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two masks with different grid geometries were combined.
    GeometryMismatch { a: (u32, u32), b: (u32, u32) },
    /// A constructor argument violated its documented range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A parameter fell outside the open interval required by a check.
    OutsideInterval {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// Offset set cannot carry an angular weight partition.
    DegenerateOffsets(&'static str),
    /// Grid too large for exhaustive enumeration.
    TooManyCells { cells: u64, cap: u64 },
    /// Exact integer scaling of the energy would overflow.
    ScaleOverflow,
    /// A fixture request cannot be realized on the given grid.
    InfeasibleFixture(&'static str),
    /// A decimal parameter string did not parse.
    BadDecimal,
    /// A check's stated precondition did not hold; no claim is made.
    PreconditionUnmet(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GeometryMismatch { a, b } => {
                write!(
                    f,
                    "grid geometry mismatch: {}x{} vs {}x{}",
                    a.0, a.1, b.0, b.1
                )
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::OutsideInterval {
                name,
                value,
                lo,
                hi,
            } => {
                write!(
                    f,
                    "`{name}` = {value} outside the open interval ({lo}, {hi})"
                )
            }
            Error::DegenerateOffsets(why) => write!(f, "degenerate stencil offsets: {why}"),
            Error::TooManyCells { cells, cap } => {
                write!(
                    f,
                    "grid has {cells} cells; exhaustive enumeration capped at {cap}"
                )
            }
            Error::ScaleOverflow => write!(f, "exact energy scale overflows 64-bit capacities"),
            Error::InfeasibleFixture(why) => write!(f, "infeasible fixture: {why}"),
            Error::BadDecimal => write!(f, "not a plain decimal number"),
            Error::PreconditionUnmet(what) => write!(f, "precondition unmet: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
