use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("invalid connection set: {0}")]
    InvalidConnectionSet(String),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop at vertex {0} in a loopless digraph")]
    LoopNotAllowed(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{m} is not a unitary divisor of {n}")]
    NotUnitaryDivisor { m: usize, n: usize },
    #[error("{k} is not a unit modulo {n}")]
    NotAUnit { k: usize, n: usize },
    #[error("{d} does not divide {n}")]
    NotADivisor { d: usize, n: usize },
    #[error("invalid CRT split of {n}: {reason}")]
    InvalidSplit { n: usize, reason: String },
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("digraph of order {order} exceeds the search bound {bound}")]
    SearchBoundExceeded { order: usize, bound: usize },
    #[error("group of order {order} exceeds the enumeration budget {budget}")]
    BudgetExceeded { order: String, budget: u64 },
    #[error("circulant {0} is not connected")]
    NotConnected(String),
    #[error("circulant {0} is not arc-transitive")]
    NotArcTransitive(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable kebab-case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroModulus => "zero-modulus",
            Error::InvalidConnectionSet(_) => "invalid-connection-set",
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::LoopNotAllowed(_) => "loop-not-allowed",
            Error::InvalidPartition(_) => "invalid-partition",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::NotUnitaryDivisor { .. } => "not-unitary-divisor",
            Error::NotAUnit { .. } => "not-a-unit",
            Error::NotADivisor { .. } => "not-a-divisor",
            Error::InvalidSplit { .. } => "invalid-split",
            Error::OrderMismatch(..) => "order-mismatch",
            Error::SearchBoundExceeded { .. } => "search-bound-exceeded",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::NotConnected(_) => "not-connected",
            Error::NotArcTransitive(_) => "not-arc-transitive",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::Parse(_) => "parse",
        }
    }
}
