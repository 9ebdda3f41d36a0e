use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain parameters: {0}")]
    InvalidParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("quotient by a sequence that is not eventually positive")]
    NotPositive,
    #[error("symbol is not defined on this model: {0}")]
    SymbolDomain(String),
    #[error("operators live on different bases")]
    BasisMismatch,
    #[error("no spectral data in the valid window")]
    EmptySpectrum,
    #[error("expected {expected} commutator pairs, got {got}")]
    PairCount { expected: usize, got: usize },
    #[error("symplectic matrix is singular")]
    SingularForm,
}

pub type Result<T> = std::result::Result<T, Error>;
