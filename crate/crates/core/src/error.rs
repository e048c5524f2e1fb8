use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("universe must contain at least one variable")]
    EmptyUniverse,

    #[error("universe of {n} variables exceeds the enumeration limit of {limit}")]
    UniverseTooLarge { n: usize, limit: usize },

    #[error("models belong to different universes")]
    UniverseMismatch,

    #[error("formula is unsatisfiable, its distance from any model is infinite")]
    InfiniteDistance,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weights must be strictly positive")]
    NonPositiveWeight,

    #[error("invalid weight scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid distance: {0}")]
    InvalidDistance(String),

    #[error("intermediate system grew to {count} constraints, above the limit of {limit}")]
    ResourceLimit { count: usize, limit: usize },

    #[error("integrity constraints are inconsistent")]
    InconsistentConstraints,

    #[error("profile entry {0} is inconsistent")]
    InconsistentEntry(usize),

    #[error("model does not satisfy the integrity constraints")]
    NotAModel,

    #[error("operation requires exactly {expected} formulae, profile has {found}")]
    Arity { expected: usize, found: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("random generation gave up after {0} attempts")]
    RetryExhausted(usize),

    #[error("realized instance does not reproduce the requested distance vectors")]
    RealizationMismatch,

    #[error("malformed auxiliary input: {0}")]
    MalformedAux(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("no excluding subset of at most {0} models exists")]
    MissingCertificate(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for this error: 3 for resource guards, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit { .. } | Error::UniverseTooLarge { .. } => 3,
            _ => 2,
        }
    }
}
