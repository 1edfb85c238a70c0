use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("denominator is identically zero")]
    ZeroDenominator,

    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("involution sign must be +1 or -1, got {0}")]
    BadLambda(i32),

    #[error("contour sampling needs at least 4 points, got {0}")]
    BadSampleCount(usize),

    #[error("branch point too close to the contour: |tau0| = {inner}, |tau0~| = {outer}")]
    BranchPointNearContour { inner: f64, outer: f64 },

    #[error("zero or pole on the contour at {location}")]
    ZeroOnContour { location: Complex64 },

    #[error("scalar function has winding number {0}; no canonical factorisation")]
    NonZeroWinding(i64),

    #[error("no canonical factorisation: {0}")]
    NonCanonical(String),

    #[error("second-column system singular or inconsistent: {0}")]
    R2SystemSingular(String),

    #[error("precondition violated: {0}")]
    PrecondViolation(String),

    #[error("matrix is not symmetric (relative defect {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("diagonal quotient a/d is unbounded at infinity")]
    QuotientUnboundedAtInfinity,

    #[error("pole on the contour at {location}")]
    PoleOnContour { location: Complex64 },

    #[error("zero of r1 at {location} has multiplicity {multiplicity}; only simple and double zeros are supported")]
    UnsupportedMultiplicity { location: Complex64, multiplicity: usize },

    #[error("pole left in a factor after cancellation at {location}")]
    ResidualPole { location: Complex64 },

    #[error("degenerate branch points at (rho, v) = ({rho}, {v})")]
    DegenerateBranch { rho: f64, v: f64 },

    #[error("function is unbounded at infinity")]
    UnboundedAtInfinity,

    #[error("matrix entry (2,2) vanishes")]
    ZeroEntry,

    #[error("quadrature did not reach tolerance after refinement")]
    PathTooCoarse,

    #[error("determinant is not identically 1 (max defect {defect:e})")]
    DeterminantNotUnit { defect: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for every failure that means the matrix has no canonical factorisation.
    pub fn is_non_canonical(&self) -> bool {
        matches!(
            self,
            Error::NonCanonical(_) | Error::R2SystemSingular(_) | Error::NonZeroWinding(_)
        )
    }
}
