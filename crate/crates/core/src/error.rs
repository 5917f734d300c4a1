use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the engine. Precondition violations are reported rather
/// than repaired, so callers can tell a malformed input from an internal bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero elements is undefined")]
    ZeroGcd,
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("elements from different rings: {0} and {1}")]
    RingMismatch(String, String),
    #[error("unknown ring tag `{0}`")]
    UnknownRing(String),
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("column {0} is zero")]
    ZeroColumn(i32),
    #[error("column {0} is not primitive")]
    NotPrimitive(i32),
    #[error("isotropy condition fails on columns {0} and {1}")]
    IsotropyViolated(i32, i32),
    #[error("symbol is degenerate (columns linearly dependent)")]
    Degenerate,
    #[error("index of the column lattice is 1; no candidate is required")]
    IndexOne,
    #[error("index {0} lies in D_x")]
    InDx(i32),
    #[error("invalid index {index} for n = {n}")]
    BadIndex { index: i32, n: usize },
    #[error("index set is not isotropic")]
    NotIsotropic,
    #[error("symplectic Hermite form: central block column {0} is zero")]
    HnfDegenerate(usize),
    #[error("link factorization X = W m' failed")]
    FactorizationMismatch,
    #[error("lifted symbol violates the isotropy condition")]
    LiftNotIsotropic,
    #[error("depth did not decrease: parent {parent}, child {child}")]
    DepthNotDecreasing { parent: String, child: String },
    #[error("chain equality failed during reduction: {0}")]
    ChainMismatch(String),
    #[error("random generation could not satisfy entry bound {0}")]
    BoundTooSmall(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used in structured error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division-by-zero",
            Error::ZeroGcd => "zero-gcd",
            Error::ZeroVector => "zero-vector",
            Error::RingMismatch(..) => "ring-mismatch",
            Error::UnknownRing(_) => "unknown-ring",
            Error::NonSquare { .. } => "non-square",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::Dependent => "dependent",
            Error::ZeroColumn(_) => "zero-column",
            Error::NotPrimitive(_) => "not-primitive",
            Error::IsotropyViolated(..) => "isotropy-violated",
            Error::Degenerate => "degenerate",
            Error::IndexOne => "index-one",
            Error::InDx(_) => "index-in-dx",
            Error::BadIndex { .. } => "bad-index",
            Error::NotIsotropic => "not-isotropic",
            Error::HnfDegenerate(_) => "hnf-degenerate",
            Error::FactorizationMismatch => "factorization-mismatch",
            Error::LiftNotIsotropic => "lift-not-isotropic",
            Error::DepthNotDecreasing { .. } => "depth-not-decreasing",
            Error::ChainMismatch(_) => "chain-mismatch",
            Error::BoundTooSmall(_) => "bound-too-small",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
        }
    }

    /// Malformed input as opposed to a domain-level failure.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::UnknownRing(_))
    }
}
