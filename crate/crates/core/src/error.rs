use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("representation needs at least one coordinate and one torus direction")]
    EmptyWeights,
    #[error("weight entry {0} exceeds the supported magnitude 1e6")]
    WeightTooLarge(i64),
    #[error("matrix basis is empty")]
    EmptyBasis,
    #[error("basis matrix {index} is not square of the common dimension")]
    BadMatrixShape { index: usize },
    #[error("basis matrix {index} is not skew-Hermitian (residual {residual:e})")]
    NotSkewHermitian { index: usize, residual: f64 },
    #[error("bracket [xi_{a}, xi_{b}] leaves the span of the basis (residual {residual:e})")]
    NotClosedUnderBracket { a: usize, b: usize, residual: f64 },
    #[error("inner product is not symmetric positive-definite")]
    NotPositiveDefinite,
    #[error("inner product is not Ad-invariant")]
    NotAdInvariant,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("complexified action overflowed (coordinate magnitude {0:e})")]
    Overflow(f64),
    #[error("vectors do not span a subalgebra (residual {0:e})")]
    NotSubalgebra(f64),
    #[error("torus generators {a} and {b} do not commute (bracket norm {norm:e})")]
    NotCommuting { a: usize, b: usize, norm: f64 },
    #[error("the zero vector is not a point of projective space")]
    ZeroProjectivePoint,
    #[error("invalid flow parameter `{0}`")]
    InvalidFlowParams(&'static str),
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("operation requires a torus representation")]
    NotTorusKind,
    #[error("point has empty support")]
    EmptySupport,
    #[error("operation is undefined at the zero point")]
    ZeroPoint,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("samples are not polynomial of the requested degree (mismatch at j = {0})")]
    NotPolynomial(i64),
    #[error("leading coefficient a0 must be positive")]
    NonpositiveLeadingCoefficient,
    #[error("enumeration bound exceeded (d <= 4 and j <= 30 required)")]
    EnumerationBoundExceeded,
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("least-squares system is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at `{path}`: {reason}")]
    Schema { path: String, reason: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
