//! Crate-wide error type.

/// Errors reported by the library.
///
/// Validation happens at construction boundaries (states, pairs, spectral
/// data); numerical routines assume validated inputs and only fail on
/// domain violations or internal cross-check mismatches.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Argument outside a function's domain (negative scalar, etc).
    #[error("argument outside domain: {0}")]
    Domain(String),
    /// Constructor parameter outside its admissible range.
    #[error("parameter out of range: {0}")]
    Parameter(String),
    /// Non-square matrix where a square one is required.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare {
        /// Row count of the offending matrix.
        rows: usize,
        /// Column count of the offending matrix.
        cols: usize,
    },
    /// Dimensions of two operands disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Hermiticity residual above tolerance.
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian {
        /// Relative Frobenius residual of `X - X^dag`.
        residual: f64,
    },
    /// Matrix has an eigenvalue below the admissible floor.
    #[error("matrix is not positive (semi)definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive {
        /// Smallest eigenvalue found.
        min_eigenvalue: f64,
    },
    /// Trace differs from the required value.
    #[error("trace must be {expected} (got {trace})")]
    InvalidTrace {
        /// Required trace.
        expected: f64,
        /// Observed trace.
        trace: f64,
    },
    /// A faithful (strictly positive) state is required.
    #[error("state is singular for this operation (min eigenvalue {min_eigenvalue:.3e})")]
    SingularState {
        /// Smallest eigenvalue of the state.
        min_eigenvalue: f64,
    },
    /// Two independent computation routes disagreed beyond tolerance.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
    /// Invalid run or sampler configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Underlying I/O failure.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// Serialization failure.
    #[error("serialization: {0}")]
    Serialize(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
