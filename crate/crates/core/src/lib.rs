pub mod contour;
pub mod error;
pub mod gravity;
pub mod linsolve;
pub mod matrix;
pub mod ratfun;
pub mod rhfirst;
pub mod scalarfac;
pub mod whsym;

pub use contour::{make_contour, Contour, Region};
pub use error::{Error, Result};
pub use matrix::{j_matrix, CMat2, RationalMatrix2};
pub use ratfun::{AtInfinity, CPoly, CRational, RootCluster};
pub use rhfirst::ColumnPair;
pub use scalarfac::ScalarFactorization;
pub use whsym::{factorize, Factorization, VerificationReport};
