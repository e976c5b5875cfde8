use core::fmt;

/// Errors raised by the core routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operand shapes do not fit the operation.
    DimensionMismatch { op: &'static str, expected: (usize, usize), found: (usize, usize) },
    /// A matrix must have at least one row and one column, and a full grid of entries.
    InvalidShape { rows: usize, cols: usize, entries: usize },
    /// The linear system has no unique solution.
    Singular,
    /// `A` and `B` must commute for the binomial form of `Q(r, i)`.
    NonCommuting,
    /// Delay must be at least one step.
    InvalidDelay(usize),
    /// Horizon must be at least one step.
    InvalidHorizon(usize),
    /// Index outside the window covered by the data.
    IndexOutOfRange { index: i64, min: i64, max: i64 },
    /// The Kalman-type matrix does not have full row rank.
    NotControllable { rank: usize, dim: usize },
    /// The requested horizon is shorter than the minimal steering horizon.
    HorizonTooShort { horizon: usize, minimal: usize },
    /// The controllability Gramian is singular at the requested horizon.
    SingularGramian { horizon: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, expected, found } => write!(
                f,
                "{op}: dimension mismatch, expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::InvalidShape { rows, cols, entries } => {
                write!(f, "invalid matrix shape {rows}x{cols} with {entries} entries")
            }
            Error::Singular => write!(f, "matrix is singular"),
            Error::NonCommuting => write!(f, "A and B do not commute"),
            Error::InvalidDelay(p) => write!(f, "delay must be >= 1, got {p}"),
            Error::InvalidHorizon(r) => write!(f, "horizon must be >= 1, got {r}"),
            Error::IndexOutOfRange { index, min, max } => {
                write!(f, "index {index} outside [{min}, {max}]")
            }
            Error::NotControllable { rank, dim } => {
                write!(f, "system is not relatively controllable: rank(S) = {rank} < {dim}")
            }
            Error::HorizonTooShort { horizon, minimal } => {
                write!(f, "horizon {horizon} is shorter than the minimal horizon {minimal}")
            }
            Error::SingularGramian { horizon } => {
                write!(f, "controllability Gramian is singular at horizon {horizon}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
