use thiserror::Error;

use crate::abs::Symbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a Newton polygon needs at least one segment")]
    EmptyPolygon,

    #[error("segment {index} = ({m},{n}) is not a coprime pair")]
    CoprimalityViolation { index: usize, m: u32, n: u32 },

    #[error("slope increases at segment {index}")]
    SlopeOrderViolation { index: usize },

    #[error("curtailment undefined: segment {index} = ({m},{n}) has m > n")]
    CurtailUndefined { index: usize, m: u32, n: u32 },

    #[error("the Euclidean reduction is undefined when all slopes coincide")]
    PhiUndefined,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("symbol {0} is not in the sequence")]
    SymbolNotInSequence(Symbol),

    #[error("invalid arrowed binary sequence: {0}")]
    InvalidAbs(String),

    #[error("invalid modification pair: {0}")]
    InvalidPair(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("parabolic subgroup has {size} elements, over the budget of {budget}")]
    ContextTooLarge { size: u128, budget: u128 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("verification failed: {witness}")]
    VerificationFailure { witness: String },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}
