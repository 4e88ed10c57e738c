use thiserror::Error;

/// Errors shared across the library.
///
/// Violation *reports* (failed axioms, inconsistent tuples) are data, not
/// errors; this type covers genuine misuse of an operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element identifier {0}")]
    UnknownElement(usize),
    #[error("invalid hereditary set: {0}")]
    InvalidHereditarySet(String),
    #[error("semilattice has {size} elements; exhaustive scans are limited to {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("model mismatch: {0} vs {1}")]
    ModelMismatch(String, String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be distinct, got {0} twice")]
    EqualPrimes(u64),
    #[error("subgroup has infinite index (generator matrix is singular)")]
    InfiniteIndex,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed value: {0}")]
    Malformed(String),
    #[error("unsupported in this model: {0}")]
    UnsupportedScope(String),
}

pub type Result<T> = std::result::Result<T, Error>;
