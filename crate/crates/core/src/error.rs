use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("generator index {index} out of range ({count} generators)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("SVD failed to converge")]
    ConvergenceFailure,
    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("Gauss-Newton did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("rank decision unstable: singular value {value:e} within a factor 10 of cutoff {cutoff:e}")]
    RankInstability { value: f64, cutoff: f64 },
    #[error("not a standard surface presentation: {0}")]
    NotSurfacePresentation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("map does not define an endomorphism (relator residual {residual:e})")]
    NotEndomorphism { residual: f64 },
    #[error("retraction left the chart (correction {correction:e} exceeds step {step:e})")]
    LeftChart { correction: f64, step: f64 },
    #[error("family tangent is not a cocycle (residual {residual:e})")]
    NotTangent { residual: f64 },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::Syntax(_) => "SyntaxError",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidPresentation(_) => "InvalidPresentation",
            Error::InvalidInput(_) => "InvalidInput",
            Error::ConvergenceFailure => "ConvergenceFailure",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::Shape(_) => "ShapeMismatch",
            Error::NonFinite => "NonFinite",
            Error::InvalidRepresentation(_) => "InvalidRepresentation",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::RankInstability { .. } => "RankInstability",
            Error::NotSurfacePresentation(_) => "NotSurfacePresentation",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotEndomorphism { .. } => "NotEndomorphism",
            Error::LeftChart { .. } => "LeftChart",
            Error::NotTangent { .. } => "NotTangent",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::Json(_) => "JsonError",
            Error::Io(_) => "IoError",
        }
    }

    /// Whether the error stems from malformed input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownGenerator(_)
                | Error::Syntax(_)
                | Error::IndexOutOfRange { .. }
                | Error::InvalidPresentation(_)
                | Error::InvalidInput(_)
                | Error::Shape(_)
                | Error::NonFinite
                | Error::InvalidRepresentation(_)
                | Error::NotSurfacePresentation(_)
                | Error::DegreeMismatch { .. }
                | Error::NotEndomorphism { .. }
                | Error::NotTangent { .. }
                | Error::InvalidFamily(_)
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
