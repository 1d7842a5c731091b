use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the enumeration cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("cone is not pointed: its facets do not span the space")]
    NotPointed,

    #[error("cone is not generating: its generators span {rank} of {dim} dimensions")]
    NotGenerating { rank: usize, dim: usize },

    #[error("inconsistent cone description: {0}")]
    Inconsistent(String),

    #[error("order unit is not strictly positive on the cone: {0}")]
    UnitNotStrictlyPositive(String),

    #[error("unsupported cone kind: {0}")]
    Unsupported(String),

    #[error("value not exactly representable: {0}")]
    Inexact(String),

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("state space is a simplex; every mixed state decomposes uniquely")]
    Simplicial,

    #[error("search cap exceeded: {0}")]
    SearchCap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
