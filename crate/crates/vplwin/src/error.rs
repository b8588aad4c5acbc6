use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("word is not well-matched")]
    NotWellMatched,
    #[error("word is not descending")]
    NotDescending,
    #[error("empty word where a non-empty one is required")]
    EmptyWord,
    #[error("configuration is not reachable")]
    UnreachableConfiguration,
    #[error("invalid factorization: {0}")]
    BadFactorization(String),
    #[error("not a word of the flat alphabet shape: {0}")]
    NotAllFlat(String),
    #[error("machine is ambiguous on input {0:?}")]
    Ambiguous(Vec<usize>),
    #[error("language is not bounded")]
    NotBounded,
    #[error("S0 is not bounded; the regular flat language is undefined")]
    S0Unbounded,
    #[error("word is not in the regular flat language")]
    NotRegFlat,
    #[error("no approximation found: {0}")]
    NoApx(String),
    #[error("algorithm does not fit machine: {0}")]
    KindMachineMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("inconsistent evidence: {0}")]
    InconsistentEvidence(String),
    #[error("{0}")]
    Other(String),
}
