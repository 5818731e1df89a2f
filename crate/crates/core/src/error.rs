use thiserror::Error;

/// Errors raised by evaluation, iteration steps, maps and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation overflowed to a non-finite value")]
    EvaluationOverflow,
    #[error("point is an exact root (value vanishes)")]
    AtRoot,
    #[error("derivative vanishes at a non-root point")]
    DerivativeZero,
    #[error("nodes {first} and {second} coincide")]
    CoincidentNodes { first: usize, second: usize },
    #[error("correction denominator vanishes at node {index}")]
    ZeroDenominator { index: usize },
    #[error("approximation coincides with tame root {index}")]
    TameCollision { index: usize },
    #[error("catastrophic cancellation in deflated Newton ratio")]
    Cancellation,
    #[error("point hits the pole of the map")]
    Pole,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("root-squaring ratio is undefined at the origin")]
    AtOrigin,
    #[error("point coincides with a secular node")]
    AtNode,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("step magnitudes are not decreasing")]
    Stagnation,
    #[error("map construction failed: {0}")]
    ConstructionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects NaN and infinite components.
pub(crate) fn finite(z: crate::Complex) -> Result<crate::Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::EvaluationOverflow)
    }
}
