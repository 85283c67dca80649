use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rational `{0}` (expected p/q or an integer)")]
    MalformedRational(String),
    #[error("negative truncation depth {0}")]
    NegativeDepth(i64),
    #[error("weight not in support window")]
    WeightNotInWindow,
    #[error("subspace is not closed under the action of {generator} at depth {depth}")]
    NotClosed { generator: &'static str, depth: usize },
    #[error("character not a nonnegative combination of simples in window (depth {depth})")]
    NegativeResidual { depth: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("window too small: need depth at least {needed}, got {got}")]
    WindowTooSmall { needed: usize, got: usize },
    #[error("Ext¹ did not stabilize below depth cap {cap}: dimensions {dims:?}")]
    NotStabilized { cap: usize, dims: Vec<usize> },
    #[error("structure check failed: {0}")]
    StructureMismatch(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
