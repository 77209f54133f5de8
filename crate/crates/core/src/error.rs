use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polygon is a single point")]
    DegeneratePoint,
    #[error("empty domain [{lo}, {hi}]")]
    EmptyDomain { lo: String, hi: String },
    #[error("code length r = {0} out of range")]
    ROutOfRange(usize),
    #[error("cannot take {requested} rows from a code with {available}")]
    DTooLarge { requested: usize, available: usize },
    #[error("need at least {min} pieces, got {found}")]
    DTooSmall { min: usize, found: usize },
    #[error("instance exceeds supported scale: {0}")]
    ScaleLimit(String),
    #[error("cover ground set is not contained in the lambda index set")]
    GroundSetMismatch,
    #[error("code differences span no direction")]
    DegenerateDirections,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid triangle cover: {0}")]
    InvalidTriangleCover(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("variable bounds fall outside the function domain: {0}")]
    DomainMismatch(String),
    #[error("name longer than 255 characters: {0}")]
    NameTooLong(String),
    #[error("model has no variables")]
    EmptyModel,
    #[error("invalid input: {0}")]
    Invalid(String),
}
