use thiserror::Error;

/// Failures of finite group construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cyclic factor orders must be positive, got {0}")]
    NonPositiveOrder(i64),
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: u128, cap: u64 },
    #[error("element {element} does not belong to Z({orders})")]
    ForeignElement { element: String, orders: String },
    #[error("index {0} is outside the group")]
    IndexOutOfRange(usize),
    #[error("subset is not a subgroup")]
    NotASubgroup,
}

/// Failures of the integer trace machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace is not of the form C ∩ H with odd index: {reason}")]
    NotMidconvexTrace { reason: String },
    #[error("window [{lo}, {hi}] is too small to certify the minimal nonzero trace element (need radius {needed})")]
    WindowTooSmall { lo: i64, hi: i64, needed: u64 },
    #[error("step must be nonzero")]
    ZeroStep,
    #[error("{0} is outside the window [{1}, {2}]")]
    OutsideWindow(i64, i64, i64),
    #[error("{0} is not a member of the set")]
    NotAMember(i64),
    #[error("invalid window: lo {0} > hi {1}")]
    InvalidWindow(i64, i64),
    #[error("period must be positive")]
    ZeroPeriod,
}

/// Failures of rational group descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("generator must be a positive rational, got {0}")]
    NonPositiveGenerator(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{sub} is not a subgroup of {ambient}")]
    NotASubgroup { sub: String, ambient: String },
    #[error("interval endpoints out of order: {0}")]
    InvalidInterval(String),
    #[error("base point {0} is outside the interval")]
    BaseOutsideInterval(String),
    #[error("sample must be nonempty")]
    EmptySample,
    #[error("{0} is not an element of the ambient group")]
    NotInGroup(String),
}

/// Failures raised by the decompositions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("set is not midconvex: {reason}")]
    NotMidconvex { reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("resource cap hit: {0}")]
    ResourceCap(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

impl From<TraceError> for EngineError {
    fn from(err: TraceError) -> Self {
        match err {
            TraceError::NotMidconvexTrace { reason } => EngineError::NotMidconvex { reason },
            TraceError::WindowTooSmall { .. } => EngineError::WindowTooSmall(err.to_string()),
            other => EngineError::Precondition(other.to_string()),
        }
    }
}

/// Failures of the input language: malformed text, or well-formed text that
/// does not fit its group.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("type error: {0}")]
    Type(String),
}
