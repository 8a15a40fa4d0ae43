//! Exact arithmetic for quaternion algebras, p-adic fields and the binary and
//! ternary quadratic forms attached to them.
//!
//! Everything is computed over `Q`, `Q_p` and the unramified quadratic
//! extension `Q_{p^2} = Q_p(sqrt(eps))` with arbitrary-precision integers and
//! rationals; there is no floating point anywhere. The main pipelines are:
//!
//! * [`transforms`] — classification of transformations in `PGL_2(Q_p)`, the
//!   attached binary quadratic form `f_g = [c, d-a, -b]` and its zeros (the
//!   fixed points of the Moebius action).
//! * [`embeddings`] — representations of integers by ternary normic forms of
//!   quaternion orders over `Z[1/p]`, and the bijections between such
//!   representations, embeddings of quadratic orders and p-adic binary forms.
//! * [`counting`] — class numbers of imaginary quadratic orders, local
//!   embedding factors and the resulting CM point counts.
//! * [`family2p`] — the explicit discriminant-2p family over the order
//!   `Z[1,i,j,(1+i+j+k)/2]` in `(-1,-1 / Q)`, for `p = 1 (mod 4)`.
//! * [`equivalence`] — bounded search for equivalence witnesses under the
//!   p-adic uniformizing group.

pub mod counting;
pub mod embeddings;
pub mod equivalence;
pub mod exact;
pub mod family2p;
pub mod lattice;
pub mod orders;
pub mod padic;
pub mod quaternion;
pub mod selftest;
pub mod transforms;

/// Crate-wide error type.
///
/// Precision-related variants signal that a result could not be certified at
/// the working p-adic precision; all other variants are violated
/// preconditions.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("primality testing beyond 64 bits is not supported: {0}")]
    PrimeTooLarge(String),
    #[error("the prime 2 is not supported here")]
    EvenPrime,
    #[error("cannot factor {0}: remaining cofactor is too large")]
    FactorTooLarge(String),
    #[error("not square-free: {0}")]
    NotSquareFree(String),
    #[error("denominator of {0} is not a power of {1}")]
    NotPPowerDenominator(String, u64),
    #[error("insufficient p-adic precision: {0}")]
    InsufficientPrecision(String),
    #[error("not a square in Q_p")]
    NotASquare,
    #[error("odd valuation: the square root lies in a ramified extension")]
    RamifiedSquareRoot,
    #[error("value is a square in Q_p; its root does not generate the quadratic extension")]
    ResidueSquare,
    #[error("matrix is not invertible")]
    NonInvertible,
    #[error("scalar transformation: the attached form is identically zero")]
    ScalarTransform,
    #[error("fixed points lie in a ramified quadratic extension, outside Q_{{p^2}}")]
    RamifiedFixedPoints,
    #[error("point has no sqrt(eps)-component: it lies on the boundary P^1(Q_p)")]
    NotInUpperHalfPlane,
    #[error("{0} is not a square residue at p: the matricial immersion is refused")]
    PresentationNotSplit(String),
    #[error("basis is not normalized: {0}")]
    NotNormalized(String),
    #[error("quaternion does not lie in the order: {0}")]
    NotInOrder(String),
    #[error("norm mismatch: {0}")]
    NormMismatch(String),
    #[error("quadratic form is not positive definite")]
    IndefiniteForm,
    #[error("invalid discriminant: {0}")]
    InvalidDiscriminant(String),
    #[error("level must be square-free: {0}")]
    LevelNotSquareFree(String),
    #[error("unsupported conductor: {0}")]
    UnsupportedConductor(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("{0} is not inert at p: the field is not p-imaginary")]
    NotPImaginary(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by exhausted p-adic working precision, as
    /// opposed to violated preconditions.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
