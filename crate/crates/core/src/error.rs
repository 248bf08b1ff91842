//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the algebra, lattice and resolution
/// layers. Variants carry enough context to produce a usable diagnostic
/// without holding references into caller data.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}`")]
    UnknownVariable { name: String },

    #[error("characteristic {0} is not 0 or a prime")]
    BadCharacteristic(u64),

    #[error("denominator not invertible modulo {p}")]
    NonInvertibleModP { p: u64 },

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomials belong to different rings")]
    RingMismatch,

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("polynomial is not monic of positive degree in `{var}`")]
    NotMonic { var: String },

    #[error("degree {0} too large for factorial weights")]
    DegreeTooLarge(u32),

    #[error("blow-up center must name at least two distinct ambient variables")]
    CenterTooSmall,

    #[error("variable `{name}` is not part of the ambient ring")]
    VariableNotInRing { name: String },

    #[error("generator is not divisible by {var}^{power}")]
    NotDivisible { var: String, power: u64 },

    #[error("generator `{0}` has more than two terms")]
    NonBinomialGenerator(String),

    #[error("residual ideal is empty; the chart is already terminal")]
    TerminalState,

    #[error("ray entries have inconsistent dimensions")]
    DimensionMismatch,

    #[error("rays are linearly dependent")]
    DependentRays,

    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(String),

    #[error("cone is already smooth (multiplicity 1)")]
    SmoothCone,

    #[error("cone multiplicity {0} is too large to enumerate lattice points")]
    MultiplicityTooLarge(String),

    #[error("ray {0} lies outside the support of the fan")]
    RayOutsideSupport(String),

    #[error("not a fan: {0}")]
    InvalidFan(String),

    #[error("curve must live in exactly two variables")]
    NotPlanar,

    #[error("plane-curve resolution requires characteristic 0")]
    CurveNeedsCharZero,

    #[error("curve has a repeated component; pass a squarefree equation")]
    NonReducedCurve,

    #[error(
        "singular locus has non-rational candidate coordinates \
         (certificate degree {degree}); only rational centers are supported"
    )]
    IrrationalSingularLocus { degree: usize },

    #[error("cannot certify that the singular locus is rational")]
    SingularLocusUndecided,

    #[error("coefficient too large for rational root extraction")]
    RootSearchOverflow,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed tree data: {0}")]
    MalformedTree(String),

    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
