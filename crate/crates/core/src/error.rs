use thiserror::Error;

/// Errors produced by the library.
///
/// `Parse` is reserved for text/JSON deserialization problems; everything
/// else is a domain error (violated precondition, unsupported input). The
/// CLI maps `Parse` to exit code 1 and the rest to exit code 2.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("algebra tag mismatch: {0}")]
    TagMismatch(String),

    #[error("unsupported degree {degree} for algebra {tag}")]
    UnsupportedDegree { tag: String, degree: i64 },

    #[error("pole at base point: x = 0 but the Laurent polynomial has negative-degree terms")]
    PoleAtBasePoint,

    #[error("operation undefined for the zero functional")]
    ZeroFunctional,

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("insufficient terms: need at least {need}, got {got}")]
    InsufficientTerms { need: usize, got: usize },

    #[error("base point {0} is forbidden here")]
    ForbiddenBasePoint(String),

    #[error("shift unsupported: {0}")]
    UnsupportedShift(String),

    #[error("truncation order too small: need at least {need}, got {got}")]
    TruncationTooSmall { need: usize, got: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("nonzero central part where none is allowed")]
    NonzeroCentral,

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("codimension {0} exceeds the classified range (<= 3)")]
    CodimTooLarge(usize),

    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),

    #[error("insufficient lifts: need v_p for p in {{{needed}}} (d = {d}, q1 = {q1}, q2 = {q2})")]
    InsufficientLifts {
        needed: String,
        d: i64,
        q1: i64,
        q2: i64,
    },

    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True when the error is a text/JSON parse failure (CLI exit code 1).
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
