use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("indices must be strictly increasing")]
    IndexOrder,

    #[error("matrix has rank {found}, expected full row rank {expected}")]
    Rank { expected: usize, found: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("could not place rows in generic position (seed {seed}, {attempts} attempts)")]
    GenericPosition { seed: u64, attempts: u32 },

    #[error("construction failed verification: {0}")]
    Construction(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("data asset error: {0}")]
    Data(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
