use thiserror::Error;

use crate::ledger::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid index set: {0}")]
    IndexSet(String),

    #[error("matrix {name} is not skew-symmetric at ({i}, {j})")]
    NotSkewSymmetric { name: &'static str, i: usize, j: usize },

    #[error("pair is not compatible: violation at row {i}, column {j}")]
    NotCompatible { i: usize, j: usize },

    #[error("index {0} is not exchangeable")]
    NotExchangeable(usize),

    #[error("unknown index {0}")]
    UnknownIndex(usize),

    #[error("internal mismatch in {0}")]
    InternalMismatch(&'static str),

    #[error("elements live in different quantum tori")]
    AmbientMismatch,

    #[error("division by zero element")]
    ZeroDivisor,

    #[error("no exact quotient exists in the quantum torus")]
    NotDivisible,

    #[error("exponent vector has a negative entry at position {0}")]
    NegativeExponent(usize),

    #[error("postcondition failed after mutation at {k}: {what}")]
    Postcondition { k: usize, what: String },

    #[error("quantity {0} is not an integer")]
    NonIntegral(&'static str),

    #[error("ledger violates monoidal seed conditions: {0:?}")]
    InvalidLedger(Vec<Violation>),

    #[error("mutation at {k} is not simply-linked: delta = {delta}")]
    SimplyLinkedViolation { k: usize, delta: i64 },

    #[error("cross-check failed: {0}")]
    CrossCheckMismatch(String),

    #[error("identity {identity} fails at exponent {exponent:?}: lhs {lhs}, rhs {rhs}")]
    IdentityFailure {
        identity: u8,
        exponent: Vec<i64>,
        lhs: String,
        rhs: String,
    },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}
