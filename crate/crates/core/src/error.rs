use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Parameters violate a structural invariant (sizes, probabilities, arity).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Every class has `p ∈ {0, 1}`, so the entry variance vanishes and the
    /// scaled matrix is undefined.
    #[error("degenerate model: entry variance is zero (every p is 0 or 1)")]
    Degenerate,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported number of classes: expected {expected}, got {got}")]
    UnsupportedArity { expected: usize, got: usize },

    /// Expected edge count exceeds the sampler budget. Carries `ln E[#edges]`.
    #[error("sampling budget exceeded: ln(expected edges) = {log_expected:.3} > ln({max_edges})")]
    BudgetExceeded { log_expected: f64, max_edges: u64 },

    #[error("rejection sampling gave up after {0} consecutive duplicate draws")]
    RejectionLimit(u64),

    #[error("adjacency count overflow at ({0}, {1})")]
    CountOverflow(usize, usize),

    #[error("matrix is not symmetric: |a[{0}][{1}] - a[{1}][{0}]| = {2:e}")]
    NotSymmetric(usize, usize, f64),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("empty input: {0}")]
    Empty(&'static str),

    /// Exhaustive enumeration refused because `M` hyperedge slots is too many.
    #[error("enumeration too large: M = {m} exceeds the limit {limit}")]
    TooLarge { m: u64, limit: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
