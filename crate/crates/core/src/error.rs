use thiserror::Error;

/// Errors raised by graph construction and every chip-firing computation.
///
/// Vertex numbers carried by the variants are the 1-based labels used in
/// graph files, not internal positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("vertex index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("sink {0} has an outgoing edge")]
    SinkHasOutEdge(usize),
    #[error("sink unreachable from vertex {0}")]
    SinkUnreachable(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph needs at least one non-sink vertex")]
    NoVertices,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("vertex {0} is not active")]
    InactiveVertex(usize),
    #[error("negative entry at vertex {0}")]
    NegativeEntry(usize),
    #[error("configuration is not stable")]
    NotStable,
    #[error("script is not G-strongly positive")]
    NotStronglyPositive,
    #[error("target must be strictly positive")]
    NonPositiveTarget,
    #[error("non-sink part is not strongly connected")]
    NotStronglyConnected,
    #[error("{what} exceeded {limit} steps")]
    StepLimit { what: &'static str, limit: u64 },
    #[error("enumeration size {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("value does not fit in a 64-bit integer")]
    Overflow,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
