use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A generator table has a different length than the declared state space.
    #[error("generator `{label}` acts on {got} points, expected {expected}")]
    DegreeMismatch {
        label: String,
        got: usize,
        expected: usize,
    },

    /// Semigroup closure exceeded the configured element cap.
    #[error("semigroup closure exceeded the element cap of {cap}")]
    SizeCap { cap: usize },

    /// An operation that needs a zero element was applied to a semigroup without one.
    #[error("semigroup has no zero element")]
    NoZero,

    /// The minimal ideal is not a left-zero semigroup, so the absorbing-chain
    /// construction does not apply.
    #[error("minimal ideal is not a left-zero semigroup")]
    NotLeftZero,

    /// A loop carries probability mass >= 1, so its geometric factor diverges.
    #[error("loop mass {mass} at vertex {vertex} is >= 1; geometric factor diverges")]
    DivergentLoop { vertex: usize, mass: String },

    /// Conditioning on an absorption target that is never reached from the root.
    #[error("absorption target {target} is unreachable from the root")]
    UnreachableTarget { target: usize },

    /// The fixed space of the transition matrix is not one-dimensional.
    #[error("transition matrix has a {dim}-dimensional fixed space; stationary vector is not unique")]
    NotErgodic { dim: usize },

    /// Probabilities must be positive and sum to one exactly.
    #[error("probability vector is not stochastic: {reason}")]
    NonStochastic { reason: String },

    /// A series, word, or probability string failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Catch-all for violated preconditions (documented per operation).
    #[error("{0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
