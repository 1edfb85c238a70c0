//! TOML factorisation reports.

use serde::{Deserialize, Serialize};
use symwh::gravity::PointSolution;
use symwh::{CRational, VerificationReport};

use crate::config::{to_pair, Pair, RationalCoeffs};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorReport {
    pub family: String,
    pub lambda: i32,
    pub rho: f64,
    pub v: f64,
    pub pass: bool,
    /// Absent when the matrix does not depend on the spectral curve.
    #[serde(default)]
    pub branch_points: Option<BranchPoints>,
    pub factors: Factors,
    pub residuals: Residuals,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPoints {
    pub tau0: Pair,
    pub tau0tilde: Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factors {
    pub f_plus: [RationalCoeffs; 2],
    pub f_minus: [RationalCoeffs; 2],
    pub s_plus: [RationalCoeffs; 2],
    pub s_minus: [RationalCoeffs; 2],
    pub r1: RationalCoeffs,
    pub r2: RationalCoeffs,
    /// `R2` with `r2 = R2 / p2`.
    pub r2_numerator: Vec<Pair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Residuals {
    pub boundary: f64,
    pub x_at_zero: f64,
    pub determinant: f64,
    pub symmetry: f64,
    pub propagation: f64,
    pub r2_plus: f64,
    pub r2_minus: f64,
    pub tol: f64,
}

impl Residuals {
    pub fn from_report(r: &VerificationReport) -> Self {
        Residuals {
            boundary: r.boundary,
            x_at_zero: r.x_at_zero,
            determinant: r.determinant,
            symmetry: r.symmetry,
            propagation: r.propagation,
            r2_plus: r.r2_plus,
            r2_minus: r.r2_minus,
            tol: r.tol,
        }
    }
}

fn pair(col: &[CRational; 2]) -> [RationalCoeffs; 2] {
    [RationalCoeffs::from_rational(&col[0]), RationalCoeffs::from_rational(&col[1])]
}

impl Factors {
    pub fn from_solution(sol: &PointSolution) -> Self {
        let f = &sol.fact;
        Factors {
            f_plus: pair(&f.first.plus),
            f_minus: pair(&f.first.minus),
            s_plus: pair(&f.second.plus),
            s_minus: pair(&f.second.minus),
            r1: RationalCoeffs::from_rational(&f.r1.r1),
            r2: RationalCoeffs::from_rational(&f.r2),
            r2_numerator: f.r2_numerator.coeffs().iter().map(|&c| to_pair(c)).collect(),
        }
    }
}

impl FactorReport {
    pub fn new(family: &str, lambda: i32, rho: f64, v: f64, sol: &PointSolution, rep: &VerificationReport) -> Self {
        FactorReport {
            family: family.to_string(),
            lambda,
            rho,
            v,
            pass: rep.pass,
            branch_points: sol.point.map(|p| BranchPoints {
                tau0: to_pair(p.tau0),
                tau0tilde: to_pair(p.tau0tilde),
            }),
            factors: Factors::from_solution(sol),
            residuals: Residuals::from_report(rep),
        }
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}
