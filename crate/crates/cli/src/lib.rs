//! Configuration-driven front end: single-point factorisation reports,
//! metric sweeps over a `(rho, v)` grid, and the invariant suite.

pub mod commands;
pub mod config;
pub mod report;

use symwh::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_NON_CANONICAL: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_MULTIPLICITY: i32 = 4;
pub const EXIT_CONFIG: i32 = 64;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(Error),
    /// Residuals above tolerance; the message names the worst category.
    Invariant(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error[BadConfig]: {m}"),
            CliError::Io(m) => write!(f, "error[Io]: {m}"),
            CliError::Core(e) => write!(f, "error[{}]: {e}", error_kind(e)),
            CliError::Invariant(m) => write!(f, "error[InvariantFailure]: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) | CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Core(e) => exit_code(e),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_non_canonical() => EXIT_NON_CANONICAL,
        Error::DegenerateBranch { .. } => EXIT_DEGENERATE,
        Error::UnsupportedMultiplicity { .. } => EXIT_MULTIPLICITY,
        _ => EXIT_INVARIANT,
    }
}

/// Variant name, used in messages and in the grid status column.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ZeroDenominator => "ZeroDenominator",
        Error::NonConvergence { .. } => "NonConvergence",
        Error::BadLambda(_) => "BadLambda",
        Error::BadSampleCount(_) => "BadSampleCount",
        Error::BranchPointNearContour { .. } => "BranchPointNearContour",
        Error::ZeroOnContour { .. } => "ZeroOnContour",
        Error::NonZeroWinding(_) => "NonZeroWinding",
        Error::NonCanonical(_) => "NonCanonical",
        Error::R2SystemSingular(_) => "R2SystemSingular",
        Error::PrecondViolation(_) => "PrecondViolation",
        Error::NotSymmetric { .. } => "NotSymmetric",
        Error::QuotientUnboundedAtInfinity => "QuotientUnboundedAtInfinity",
        Error::PoleOnContour { .. } => "PoleOnContour",
        Error::UnsupportedMultiplicity { .. } => "UnsupportedMultiplicity",
        Error::ResidualPole { .. } => "ResidualPole",
        Error::DegenerateBranch { .. } => "DegenerateBranch",
        Error::UnboundedAtInfinity => "UnboundedAtInfinity",
        Error::ZeroEntry => "ZeroEntry",
        Error::PathTooCoarse => "PathTooCoarse",
        Error::DeterminantNotUnit { .. } => "DeterminantNotUnit",
        Error::InvalidInput(_) => "InvalidInput",
    }
}
