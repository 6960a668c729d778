use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("the shift space is empty")]
    EmptyShift,
    #[error("word {0:?} is not in the language")]
    WordNotInLanguage(Vec<String>),
    #[error("word of length {len} is shorter than the window {window}")]
    WordTooShort { len: usize, window: usize },
    #[error("word {0:?} is not in the domain language")]
    WordNotInDomain(Vec<String>),
    #[error("image word {0:?} is not in the domain of the outer code")]
    ImageNotInDomain(Vec<String>),
    #[error("code table is missing {} window(s), first {:?}", .0.len(), .0.first())]
    IncompleteTable(Vec<Vec<String>>),
    #[error("code table has window {0:?} outside the domain language")]
    ExtraWindow(Vec<String>),
    #[error("codes differ on window {window:?}")]
    Mismatch { window: Vec<String> },
    #[error("zero matrix")]
    ZeroMatrix,
    #[error("not an algebraic integer")]
    NotAlgebraicInteger,
    #[error("entropies are not separated")]
    EntropyNotSeparated,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted at n = {max_n}; closest entropy {closest}")]
    SearchExhausted { max_n: usize, closest: String },
    #[error("iteration cap reached: {0}")]
    IterationCap(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("periodic orbit not found")]
    OrbitNotFound,
    #[error("census mismatch at period {period}: expected {expected}, got {got}")]
    CensusMismatch { period: usize, expected: String, got: String },
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("target shift is not a mixing shift of finite type")]
    NotMixingTarget,
    #[error("no subshift found: {0}")]
    NotFound(String),
    #[error("no realization available: {0}")]
    RealizationUnavailable(String),
    #[error("target is not exact: {0}")]
    InexactTarget(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Precondition,
    Budget,
    InexactTarget,
    Certificate,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Parse(_) | InvalidAlphabet(_) | IncompleteTable(_) | ExtraWindow(_) => ErrorClass::Parse,
            SearchExhausted { .. } | IterationCap(_) | Budget(_) => ErrorClass::Budget,
            InexactTarget(_) => ErrorClass::InexactTarget,
            Mismatch { .. } | CensusMismatch { .. } | Certificate(_) => ErrorClass::Certificate,
            _ => ErrorClass::Precondition,
        }
    }
}
