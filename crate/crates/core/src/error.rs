use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported Weil number: characteristic polynomial {0} does not split over ±p^(m/2)")]
    UnsupportedWeilNumber(String),
    #[error("relation N·Φ = p·Φ·N violated")]
    RelationViolated,
    #[error("monodromy is not nilpotent")]
    NotNilpotent,
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("sign convention violated: {0}")]
    SignViolation(String),
    #[error("stratum {stratum} degree {degree}: impure ({detail})")]
    ImpureStratum { stratum: String, degree: i64, detail: String },
    #[error("stratum {stratum} degree {degree}: Frobenius mismatch ({detail})")]
    FrobeniusMismatch { stratum: String, degree: i64, detail: String },
    #[error("restrictions from {stratum} in degree {degree} do not compose consistently: {detail}")]
    CompositionMismatch { stratum: String, degree: i64, detail: String },
    #[error("stratum {stratum}: missing or invalid degree {degree}")]
    MissingDegree { stratum: String, degree: i64 },
    #[error("missing restriction {from} -> {to} in degree {degree}")]
    MissingRestriction { from: String, to: String, degree: i64 },
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("Clemens-Schmid {thread} thread is not a complex at node {position}")]
    NotAComplex { thread: String, position: usize },
    #[error("chi comparison mismatch in degree {degree}: {detail}")]
    Mismatch { degree: i64, detail: String },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}
