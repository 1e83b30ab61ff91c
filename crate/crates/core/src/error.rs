use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count {0} outside supported range 1..=30")]
    VariableCount(usize),
    #[error("variable x{var} out of range for n = {n}")]
    VariableOutOfRange { var: usize, n: usize },
    #[error("index {index} out of range [0, {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("mismatched variable counts {0} and {1}")]
    VariableMismatch(usize, usize),
    #[error("matrix is not lower unitriangular at row {0}")]
    NotUnitriangular(usize),

    #[error("invalid reliability sequence: {0}")]
    Sequence(String),
    #[error("invalid information set: {0}")]
    InfoSet(String),
    #[error("code length {0} is not a supported power of two")]
    CodeLength(usize),
    #[error("K = {k} out of range for N = {len}")]
    Dimension { k: usize, len: usize },

    #[error("information set is not a decreasing monomial code")]
    NotDecreasing,
    #[error("{method} method refused: {reason}")]
    Gate { method: &'static str, reason: String },
    #[error("enumeration needs 2^{bits} elements, cap is {cap}")]
    CapExceeded { bits: usize, cap: u64 },

    #[error("pair precondition violated: {0}")]
    PairPrecondition(String),
    #[error("slot {slot} demanded by both {first} and {second}")]
    SlotCollision {
        slot: String,
        first: String,
        second: String,
    },
    #[error("|W| = {size} > 1 for pair ({h1}, {h2})")]
    WTooLarge { h1: String, h2: String, size: usize },

    #[error("malformed plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
