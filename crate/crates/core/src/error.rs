use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word length {0} is outside 1..=64")]
    WordLength(usize),
    #[error("value {value:#x} does not fit in {len} bits")]
    WordValue { value: u64, len: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("order {n} is outside the supported range {min}..={max}")]
    Order { n: usize, min: usize, max: usize },
    #[error("feedback table is singular at suffix {0}")]
    Singular(String),
    #[error("invalid rule spec: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),
    #[error("rule does not produce a de Bruijn sequence: returned to the start state after {period} of {expected} steps")]
    NotDeBruijn { period: u64, expected: u64 },
    #[error("{what} needs {predicted} units of work, over the budget of {budget}")]
    Budget {
        what: String,
        predicted: u128,
        budget: u128,
    },
    #[error("fired states are not closed under conjugation: {0} fires but its conjugate does not")]
    NotConjugateClosed(String),
    #[error("not a spanning tree: {0}")]
    NotATree(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status: 1 verification failure, 2 usage or spec error, 3 budget refusal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotDeBruijn { .. } | Error::NotConjugateClosed(_) | Error::NotATree(_) => 1,
            Error::Budget { .. } => 3,
            _ => 2,
        }
    }
}
