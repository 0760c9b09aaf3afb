use okounkov::convbody::{BodyError, PolytopeError};
use okounkov::glseries::SeriesError;
use okounkov::surfacezar::SurfaceError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{source_name}:{line}:{column}: {message}")]
    Json { source_name: String, line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("field `{field}`: terms of one form have different degrees")]
    NonHomogeneous { field: String },
    #[error("field `{field}`: exponents sum to {found}, expected {expected}")]
    DegreeMismatch { field: String, found: u32, expected: u32 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        CliError::Body(e.into())
    }
}

impl CliError {
    /// 2 for bad input, 3 for an unsupported mode, 4 for a broken invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::Json { .. }
            | CliError::Schema { .. }
            | CliError::NonHomogeneous { .. }
            | CliError::DegreeMismatch { .. }
            | CliError::Argument(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Series(e) => series_code(e),
            CliError::Body(e) => match e {
                BodyError::Series(s) => series_code(s),
                BodyError::Polytope(_) => 4,
                BodyError::EmptySeries(_) | BodyError::NegativeSlice(_) => 2,
            },
            CliError::Surface(e) => match e {
                SurfaceError::CurveInNegativeSupport { .. } => 3,
                SurfaceError::SupportNotMonotone { .. }
                | SurfaceError::NegativeCoefficient { .. }
                | SurfaceError::NotNegativeDefinite => 4,
                _ => 2,
            },
        }
    }
}

fn series_code(e: &SeriesError) -> i32 {
    match e {
        SeriesError::NotMonomial { .. } => 3,
        _ => 2,
    }
}
