//! Complex polynomials, rational functions and root finding.

mod poly;
mod rational;
mod roots;

pub use poly::CPoly;
pub use rational::{AtInfinity, CRational};
pub use roots::{poly_roots, RootCluster, MAX_ITERATIONS};

/// Leading coefficients at or below this fraction of the largest are dropped.
pub const TRIM_TOL: f64 = 1e-13;

/// Default relative radius inside which roots are merged into one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// A denominator root cancels against the numerator when the numerator is
/// this small there, relative to its evaluation scale.
pub const CANCEL_TOL: f64 = 1e-12;

/// Multiple of the estimated root error added to `CANCEL_TOL`.
pub const ROOT_SLACK: f64 = 100.0;
