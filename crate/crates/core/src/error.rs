use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field modulus is not irreducible")]
    ReducibleModulus,
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("forms have different discriminants ({0} and {1})")]
    DiscriminantMismatch(i64, i64),
    #[error("form ({0}, {1}, {2}) is not primitive")]
    NonPrimitiveForm(i64, i64, i64),
    #[error("precision escalation exhausted for discriminant {disc} at {bits} bits")]
    PrecisionExhausted { disc: i64, bits: u32 },
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("tau must have positive imaginary part")]
    NotUpperHalfPlane,
    #[error("polynomial is reducible over the base field")]
    Reducible,
    #[error("singular specialization: {0}")]
    SingularCurve(String),
    #[error("twist of degree {0} is not compatible with this j-invariant")]
    IncompatibleTwist(u32),
    #[error("prime {0} is ramified or divides a denominator")]
    BadPrime(u64),
    #[error("prime is not coprime to the modulus")]
    NotCoprime,
    #[error("norm group index did not stabilize below prime bound {bound} (last index {index})")]
    NotStabilized { bound: u64, index: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("CM declaration rejected: {0}")]
    CmDeclaration(String),
    #[error("unexpected factorization shape: {0}")]
    UnexpectedShape(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status: 2 for bad input, 3 when the norm group did not
    /// stabilize, 4 for internal failures and violated invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::SingularCurve(_)
            | Error::CmDeclaration(_)
            | Error::InvalidDiscriminant(_)
            | Error::IncompatibleTwist(_) => 2,
            Error::NotStabilized { .. } => 3,
            _ => 4,
        }
    }
}
