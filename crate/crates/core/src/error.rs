use thiserror::Error;

use crate::poly::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid support at {path}: {message}")]
    InvalidSupport { path: String, message: String },

    #[error("degenerate support: {0}")]
    DegenerateSupport(String),

    #[error("{0} is not a prime (or exceeds 2^61)")]
    NotPrime(u64),

    #[error("polynomials live over different coefficient rings")]
    RingMismatch,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial is not divisible")]
    NotDivisible,

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("no p^{exponent}-th root: some exponent is not divisible")]
    NoRoot { exponent: u32 },

    #[error("monomial map produced a negative exponent")]
    NegativeExponent,

    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),

    #[error("value not representable in the coefficient ring: {0}")]
    NotInRing(String),

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no simplicial subdivision after {0} perturbation attempts")]
    PerturbationExhausted(usize),

    #[error("subdivision is not simplicial")]
    NotSimplicial,

    #[error("specialization hit a degenerate point after {0} attempts")]
    SpecializationUnlucky(usize),

    #[error("the denominator minor vanished at every one of {0} sample points")]
    AllPointsSingular(usize),

    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),

    #[error("tropical witness failed: {0}")]
    WitnessFailure(String),
}
