use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown operation `{name}` at offset {offset}")]
    UnknownOperation { name: String, offset: usize },

    #[error("operation `{name}` expects {expected} argument(s), got {found} (offset {offset})")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid algebra `{algebra}`: {message}")]
    InvalidAlgebra { algebra: String, message: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("budget exceeded while {what}: {needed} cells needed, limit {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("not a Kleene algebra: {0}")]
    NotKleene(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("variety file: {0}")]
    VarietyFile(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
