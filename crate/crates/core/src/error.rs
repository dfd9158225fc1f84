use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record {record} in {path}: {message}")]
    MalformedRecord {
        path: PathBuf,
        record: usize,
        message: String,
    },
    #[error("corpus contains zero documents")]
    ZeroDocuments,
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("empty document id at record {0}")]
    EmptyId(usize),
    #[error("vocabulary is empty after pruning")]
    EmptyVocabulary,
    #[error("sample size {size} out of range [2, {max}]")]
    SizeOutOfRange { size: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("symbol `{0}` not present")]
    SymbolNotFound(String),
    #[error("model and document-term matrix share no vocabulary")]
    EmptyOverlap,
    #[error("input outside the domain of `{measure}`: {message}")]
    DomainViolation { measure: String, message: String },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero-norm vector")]
    ZeroVector,
    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("structures are defined over different symbol sets")]
    SymbolMismatch,
    #[error("degenerate structure: centered configuration has zero norm")]
    DegenerateStructure,
    #[error("zero variance in extracted values")]
    ZeroVariance,
    #[error("fixed decisions differ: {0}")]
    PhiMismatch(String),
    #[error("labels differ across inner meta-structures")]
    LabelMismatch,
    #[error("nesting level {level} exceeds cap {cap}")]
    LevelOverflow { level: u32, cap: u32 },
    #[error("no distinct pairs to compare")]
    EmptyPairSet,
    #[error("duplicate decision {0}")]
    DuplicateDecision(String),
    #[error("store corruption in {path}: {message}")]
    StoreCorruption { path: PathBuf, message: String },
    #[error("format error in {path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
}

impl Error {
    /// Stable machine-readable identifier for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "Io",
            Error::MalformedRecord { .. } => "MalformedRecord",
            Error::ZeroDocuments => "ZeroDocuments",
            Error::DuplicateId(_) => "DuplicateId",
            Error::EmptyId(_) => "EmptyId",
            Error::EmptyVocabulary => "EmptyVocabulary",
            Error::SizeOutOfRange { .. } => "SizeOutOfRange",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::SymbolNotFound(_) => "SymbolNotFound",
            Error::EmptyOverlap => "EmptyOverlap",
            Error::DomainViolation { .. } => "DomainViolation",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::ZeroVector => "ZeroVector",
            Error::TooFew { .. } => "TooFew",
            Error::SymbolMismatch => "SymbolMismatch",
            Error::DegenerateStructure => "DegenerateStructure",
            Error::ZeroVariance => "ZeroVariance",
            Error::PhiMismatch(_) => "PhiMismatch",
            Error::LabelMismatch => "LabelMismatch",
            Error::LevelOverflow { .. } => "LevelOverflow",
            Error::EmptyPairSet => "EmptyPairSet",
            Error::DuplicateDecision(_) => "DuplicateDecision",
            Error::StoreCorruption { .. } => "StoreCorruption",
            Error::Format { .. } => "Format",
            Error::Config { .. } => "Config",
            Error::Unknown { .. } => "Unknown",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
