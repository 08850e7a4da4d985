use thiserror::Error;

/// Errors raised by trajectory construction, simulation and the experiment harness.
#[derive(Debug, Error)]
pub enum HuntError {
    /// Inputs that collapse the geometry, e.g. coincident points.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Computing the exact Basic Traversal cost would need more tile columns
    /// than the calculator is allowed to sweep.
    #[error("column guard: {columns} tile columns exceed the limit of {limit}")]
    ColumnGuard { columns: f64, limit: u64 },

    /// A trajectory stream broke its own invariants (e.g. a gap between runs).
    #[error("malformed stream: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = HuntError> = std::result::Result<T, E>;
