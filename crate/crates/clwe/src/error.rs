use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("vocabulary is empty")]
    EmptyVocabulary,

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("zero vector for token {token:?}; cannot unit-normalize")]
    ZeroRow { token: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dictionary is empty")]
    EmptyDictionary,

    #[error("{side} id {id} out of range for vocabulary of size {size}")]
    IdOutOfRange {
        side: &'static str,
        id: u32,
        size: usize,
    },

    #[error("{path}:{line}: out-of-vocabulary token {token:?}")]
    OutOfVocabulary {
        path: PathBuf,
        line: usize,
        token: String,
    },

    #[error("{what} does not refer to the given space")]
    SpaceMismatch { what: &'static str },

    #[error("matrix is not orthogonal: max |W'W - I| = {deviation:.3e}")]
    NotOrthogonal { deviation: f64 },

    #[error("non-finite value in {what}")]
    NonFinite { what: String },

    #[error("neighborhood size {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("corpus is empty after filtering")]
    EmptyCorpus,

    #[error("rows must be unit-normalized before {op} (last normalization step is not `unit`)")]
    NotUnitNormalized { op: &'static str },

    #[error("no identical tokens shared between the two vocabularies")]
    NoIdenticalTokens,

    #[error("too few usable words: need at least {needed}, found {found}")]
    TooFewWords { needed: usize, found: usize },

    #[error("missing checkpoint for {stage}: {path}")]
    MissingCheckpoint { stage: String, path: PathBuf },

    #[error("coordinate frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: String, found: String },

    #[error("workdir is locked by another run: {path}")]
    WorkdirLocked { path: PathBuf },

    #[error("nothing to evaluate: every gold source word is out of vocabulary")]
    EmptyEvaluation,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
