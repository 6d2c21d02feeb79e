use thiserror::Error;

/// Errors raised by the algebra and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("pole at q = i: {0}")]
    PoleAtI(String),
    #[error("vector is not of pure weight: {0}")]
    MixedWeight(String),
    #[error("relation {relation} violated on {witness}")]
    RelationViolated { relation: String, witness: String },
    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),
    #[error("exchange relation violated at position {position} for {witness}")]
    ExchangeViolated { position: usize, witness: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parity mismatch: {0}")]
    ParityError(String),
    #[error("extension is not unique: {0}")]
    ExtensionNotUnique(String),
    #[error("no extension satisfies the recursion: {0}")]
    ExtensionNotFound(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("element is not in the space: {0}")]
    NotInSpace(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ledger conflict for {context} (i={i}, j={j}): stored {stored}, measured {measured}")]
    LedgerConflict {
        context: String,
        i: u8,
        j: u8,
        stored: String,
        measured: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
