use thiserror::Error;

/// Errors raised by the exact operator machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible parameter sets {left:?} and {right:?}")]
    ParamMismatch { left: Vec<String>, right: Vec<String> },

    #[error("invalid parameter name {0:?}")]
    InvalidParamName(String),

    #[error("unknown parameter {0:?}")]
    UnknownParam(String),

    #[error("operation undefined on the zero operator")]
    ZeroOperator,

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("parameters must be numeric here, found symbolic {0:?}")]
    SymbolicParams(Vec<String>),

    #[error("empty ansatz: {0}")]
    EmptyAnsatz(String),

    #[error("no element of order {order} found up to degree cap {cap} (last degree bound {last_degree})")]
    EscalationCap { order: usize, cap: usize, last_degree: usize },

    #[error("no element of order {0} in the centralizer basis")]
    NoElementOfOrder(usize),

    #[error("centralizer has {count} independent elements of order {order}; companion is ambiguous")]
    AmbiguousCompanion { order: usize, count: usize },

    #[error("leading coefficients cannot be normalized: {0}")]
    Normalization(String),

    #[error("orders {l} and {m} do not satisfy 2*ord(M) = (2g+1)*ord(L)")]
    OrderMismatch { l: usize, m: usize },

    #[error("coefficient ratio at order {order} is not x-free: {ratio}")]
    NotConstant { order: usize, ratio: String },

    #[error("reduction left a nonzero remainder of order {0}")]
    NonzeroRemainder(usize),

    #[error("operator is not of the form (D^2+V)^2+W: {0}")]
    NotSelfAdjointShape(String),

    #[error("no polynomial solution: {0}")]
    NoPolynomialSolution(String),

    #[error("a genus-{genus} curve needs {} coefficients, got {len}", 2 * genus + 1)]
    CurveShape { genus: u32, len: usize },

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("x = 0 is a singular point (leading coefficient vanishes there)")]
    SingularPoint,

    #[error("truncation order {got} too small, need at least {need}")]
    TruncationTooSmall { got: usize, need: usize },

    #[error("series validity exhausted: applying order {order} to a series valid through degree {valid}")]
    ValidityExhausted { order: usize, valid: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
