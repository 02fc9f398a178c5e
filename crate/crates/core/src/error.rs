use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field GF({p}^{n}) is too large to tabulate")]
    FieldTooLarge { p: u64, n: u64 },
    #[error("reducible modulus: {0}")]
    ReducibleModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular curve (zero discriminant)")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("enumeration of {size} elements exceeds the bound {bound}")]
    EnumerationBound { size: u64, bound: u64 },
    #[error("divisor support is not rational over the working field")]
    IrrationalSupport,
    #[error("transition matrix is not invertible over the overlap ring: {0}")]
    NotInvertible(String),
    #[error("bundles live on different covers")]
    MismatchedCovers,
    #[error("twist by a divisor not linearly equivalent to a multiple of the origin")]
    UnpresentableTwist,
    #[error("cohomology did not stabilize below truncation level {0}")]
    NonStabilizing(usize),
    #[error("extension construction failed: {0}")]
    ExtensionFailed(String),
    #[error("bundle is not unipotent: {0}")]
    NotUnipotent(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("profile mismatch between constructions of F_{0}")]
    ProfileMismatch(usize),
    #[error("m = {m} is not divisible by {step}")]
    NonDivisible { m: u64, step: u64 },
    #[error("basepoint check inconclusive: {0}")]
    Inconclusive(String),
    #[error("incomplete annotation table: {0}")]
    IncompleteAnnotation(String),
    #[error("condition violated at blow-up center: {0}")]
    ConditionViolated(String),
    #[error("annotation depends on the base parameter: {0}")]
    BaseDependent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
