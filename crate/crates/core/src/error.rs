use thiserror::Error;

/// Errors raised by the algebraic kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("polynomial of degree {degree} over F_{p} is not irreducible")]
    NotIrreducible { p: u64, degree: usize },
    #[error("operands live in different rings ({0})")]
    RingMismatch(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("truncation profile mismatch")]
    ProfileMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("exact division by p^{needed} impossible (valuation {valuation})")]
    NotDivisible { needed: u32, valuation: u32 },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("truncation exhausted at exponent {exponent}: need denominator depth {needed_depth}")]
    TruncationExhausted { exponent: String, needed_depth: u32 },
    #[error("constant term {0} is outside the augmentation ideal; surjectivity on constants needs an algebraically closed field")]
    ConstantTerm(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("singular curve (discriminant zero)")]
    SingularCurve,
}

pub type Result<T> = std::result::Result<T, Error>;
