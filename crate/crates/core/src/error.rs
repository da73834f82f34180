use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Row and column coordinates are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not homogeneous of degree 2 (term {term} has degree {degree})")]
    NotHomogeneousDegree2 { term: String, degree: u32 },

    #[error("variable x{index} is out of range for {vars} variables")]
    VariableOutOfRange { index: u32, vars: usize },

    #[error("vector length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("column {column} is out of range (matrix has {columns} columns)")]
    ColumnOutOfRange { column: usize, columns: usize },

    #[error("matrix is not strictly upper triangular: entry ({row}, {col}) is 1")]
    NotStrictlyUpperTriangular { row: usize, col: usize },

    #[error("Bott matrix does not satisfy the Kähler column-pairing condition")]
    NotKahler,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the configured ceiling {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("matrix is empty")]
    Empty,
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
