use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("symplectic vector has odd length {0}")]
    OddSymplecticLength(usize),

    #[error("invalid Pauli character {0:?}")]
    InvalidPauli(char),

    #[error("rows {0} and {1} anticommute")]
    NotSelfOrthogonal(usize, usize),

    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("invalid code construction: {0}")]
    InvalidSpec(String),

    #[error("check {check} has degree {degree}, above the oracle limit {limit}")]
    DegreeTooLarge {
        check: usize,
        degree: usize,
        limit: usize,
    },

    #[error("alist line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error("stabilizer text line {line}: {msg}")]
    StabilizerText { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
