use thiserror::Error;

use crate::cycles::FailedCheck;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scale m = {m} is too small, need m >= 2")]
    InvalidScale { m: usize },

    #[error("only {rho} prime(s) strictly between {lo} and {hi} (m = {m}); need at least 2")]
    RhoTooSmall { m: usize, rho: usize, lo: usize, hi: usize },

    #[error("{what} index {index} out of range (valid: {lo}..={hi})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        lo: usize,
        hi: usize,
    },

    #[error("cannot compose systems with different {0}")]
    MixedShapes(&'static str),

    #[error("window length mismatch: system memory is {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("scaled weight does not fit in 64 bits (denominator {denominator})")]
    ScaleOverflow { denominator: String },

    #[error("value {0} does not fit in 64 bits")]
    Overflow(String),

    #[error("no repeated state within a budget of {budget} steps")]
    BudgetExceeded { budget: u64 },

    #[error("predicted (transient {transient}, period {period}) rejected: {check}")]
    PredictionFailed {
        transient: u64,
        period: u64,
        check: FailedCheck,
    },

    #[error("basin claim needs d < min beta = {beta_min}, got d = {d}")]
    HypothesisUnmet { d: usize, beta_min: usize },

    #[error("claim {claim} is not handled by {checker}")]
    UnsupportedClaim {
        claim: &'static str,
        checker: &'static str,
    },

    #[error("shifted index set B_{d}({d}) reaches {max_index}, beyond memory {memory}")]
    ShiftExceedsMemory {
        d: usize,
        max_index: usize,
        memory: usize,
    },
}
