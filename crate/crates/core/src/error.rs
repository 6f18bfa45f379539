use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("cancellation ambiguity: leading terms cancel at exponent {exponent}")]
    CancellationAmbiguity { exponent: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("not Gamma-admissible: {0}")]
    Admissibility(String),

    #[error("point is not Gamma-rational: {0}")]
    Rationality(String),

    #[error("not complete: {0}")]
    NotComplete(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("{0} is not a vertex of the complex")]
    NotAVertex(String),

    #[error("ambient mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("ambient dimension {0} is outside the supported range 1..=3")]
    UnsupportedDimension(usize),

    #[error("polynomial is not homogeneous: {0}")]
    NonHomogeneous(String),

    #[error("refinement failure: {0}")]
    Refinement(String),

    #[error("insertion order violated: {0}")]
    InsertionOrder(String),

    #[error("integer overflow in lattice enumeration")]
    Overflow,

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::Syntax { .. } => "syntax",
            Error::CancellationAmbiguity { .. } => "cancellation_ambiguity",
            Error::NotPrime(_) => "not_prime",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::InvalidValue(_) => "invalid_value",
            Error::Admissibility(_) => "admissibility",
            Error::Rationality(_) => "rationality",
            Error::NotComplete(_) => "not_complete",
            Error::InvalidComplex(_) => "invalid_complex",
            Error::NotAVertex(_) => "not_a_vertex",
            Error::AmbientMismatch(..) => "ambient_mismatch",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::NonHomogeneous(_) => "non_homogeneous",
            Error::Refinement(_) => "refinement",
            Error::InsertionOrder(_) => "insertion_order",
            Error::Overflow => "overflow",
            Error::Inconsistent(_) => "inconsistent",
        }
    }
}
