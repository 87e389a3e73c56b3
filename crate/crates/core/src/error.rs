use thiserror::Error;

/// Errors from constructing, transforming or parsing graphs.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("{n} vertices do not fit in 32-bit ids")]
    TooLarge { n: usize },
    #[error("vertex counts differ: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors from the refinement, decomposition and labelling algorithms.
#[derive(Debug, Error)]
pub enum AlgoError {
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("input with {n} vertices exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("scheme not applicable: {0}")]
    NotApplicable(String),
    #[error("walk budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
