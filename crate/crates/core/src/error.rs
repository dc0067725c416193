//! Engine-wide error type and the exit-code mapping the CLI relies on.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    /// Malformed or out-of-contract input (dimension mismatches, bad
    /// primes, non-ample divisors, schema violations).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested object provably does not exist in the model's
    /// bookkeeping (no splitting with the requested length, empty
    /// extension locus, negative zero-scheme length).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The answer is not determined by the data given (the open
    /// Riemann-Roch window); the engine refuses to guess.
    #[error("ambiguous range: {0}")]
    AmbiguousRange(String),

    /// Supplied data contradicts itself.
    #[error("inconsistent: {0}")]
    Inconsistent(String),

    /// An identifier in a class expression does not resolve against the
    /// active surface model.
    #[error("unknown name `{name}` at offset {offset}")]
    UnknownName { name: String, offset: usize },

    /// Lexical or grammatical error in a class expression.
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { message: String, offset: usize },
}

impl EngineError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        EngineError::InvalidInput(msg.into())
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        EngineError::Infeasible(msg.into())
    }

    /// Process exit code for this error class: invalid input of any kind
    /// is 2, infeasibility is 3. (0 = success and 1 = verification
    /// failure are decided by the caller.)
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::Infeasible(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
