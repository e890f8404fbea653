use thiserror::Error;

/// Errors produced by the library.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("`{name}` is a {actual}, not a {expected}")]
    NameConfusion {
        name: String,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("the universal role cannot be used here: {0}")]
    UniversalRole(String),

    #[error("role order is not a strict partial order: {0}")]
    InvalidOrder(String),

    #[error("invalid interpretation: {0}")]
    Interpretation(String),

    #[error("interpretation domain is empty")]
    EmptyDomain,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("step limit of {0} exceeded during normalization")]
    StepLimit(usize),

    #[error("termination measure did not decrease at rule {rule}: {before:?} -> {after:?}")]
    MeasureViolation {
        rule: u8,
        before: (u64, u64),
        after: (u64, u64),
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "E_SYNTAX",
            Error::UnknownName { .. } => "E_UNKNOWN_NAME",
            Error::NameConfusion { .. } => "E_NAME_KIND",
            Error::Signature(_) => "E_SIGNATURE",
            Error::UniversalRole(_) => "E_UNIVERSAL_ROLE",
            Error::InvalidOrder(_) => "E_ORDER",
            Error::Interpretation(_) => "E_INTERPRETATION",
            Error::EmptyDomain => "E_EMPTY_DOMAIN",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::StepLimit(_) => "E_STEP_LIMIT",
            Error::MeasureViolation { .. } => "E_MEASURE",
            Error::Internal(_) => "E_INTERNAL",
            Error::Io(_) => "E_IO",
        }
    }

    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal(_) | Error::StepLimit(_) | Error::MeasureViolation { .. }
        )
    }

    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
