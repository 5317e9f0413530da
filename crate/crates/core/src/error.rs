use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("function is not anchored: f(0) has norm {value}")]
    NotAnchored { value: String },
    #[error("point {0} is not in the table")]
    PointNotInTable(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("sample needs at least two distinct points")]
    DegenerateSample,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplex exceeded its pivot budget (cycling?)")]
    CycleDetected,
    #[error("problem has {nonzeros} nonzeros, limit is {limit}")]
    SizeLimit { nonzeros: usize, limit: usize },
    #[error("LP is {0}")]
    LpStatus(&'static str),
    #[error("molecule is not in the kernel of beta (beta = {0})")]
    NotKernel(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("window averages did not converge (last step {defect:e})")]
    NotAdmissible { defect: f64 },
    #[error("codomain norm {0} is not supported here; use linf or a scalar codomain")]
    UnsupportedCodomainNorm(String),
    #[error("isometry violated: primal {primal}, dual {dual}")]
    IsometryViolation { primal: String, dual: String },
    #[error("molecule lives in dimension {0}, expected 1")]
    NotOneDimensional(usize),
    #[error("l2 norm of {0} is irrational; use float mode")]
    InexactNorm(String),
    #[error("{0} needs float mode")]
    RequiresFloat(&'static str),
    #[error("format error at line {line}, column {column}: {msg}")]
    Format {
        line: usize,
        column: usize,
        msg: String,
    },
}
