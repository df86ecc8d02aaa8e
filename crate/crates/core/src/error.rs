use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    Dimension { expected: usize, rows: usize, cols: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: u8, found: u8 },

    #[error("postselected bit must be 0 or 1, got {0}")]
    InvalidBit(u8),

    #[error("outcome has zero probability (p = {0:e})")]
    ZeroProbability(f64),

    #[error("circuit is not interacting (it reduces to the {0} form), no recovery circuit exists")]
    NotInteracting(String),

    #[error("no single-qubit Clifford matches the residual gate (distance {0:e})")]
    NoCliffordMatch(f64),

    #[error("degenerate protocol configuration: {0}")]
    DegenerateConfig(String),

    #[error("invalid protocol configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown gate token `{0}`")]
    UnknownGate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
