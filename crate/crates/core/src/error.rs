use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("enumeration overflow: {needed} points exceed the cap of {cap}")]
    EnumerationOverflow { needed: u128, cap: usize },

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("map is not R-linear: {0}")]
    NotLinear(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("maps are not composable: {0}")]
    NotComposable(String),

    #[error("invalid j-sequence: {0}")]
    InvalidJSequence(String),

    #[error("prescribed map fails its defining equation: {0}")]
    PrescribedMapInvalid(String),

    #[error("octahedron could not be completed: {0}")]
    Octahedron(String),

    #[error("class is not a d_{stage} cycle")]
    NotACycle { stage: usize },

    #[error("resolution too short: need length {needed}, have {have}")]
    ResolutionTooShort { needed: usize, have: usize },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed triangle: {0}")]
    MalformedTriangle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
