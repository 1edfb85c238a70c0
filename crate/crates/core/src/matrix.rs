//! 2x2 matrices of rational functions and the symplectic unit `J`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::Result;
use crate::ratfun::{AtInfinity, CRational};

pub type CMat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `J = [[0, -1], [1, 0]]`
pub fn j_matrix() -> CMat2 {
    CMat2::new(ZERO, -ONE, ONE, ZERO)
}

#[derive(Clone, Debug)]
pub struct RationalMatrix2 {
    pub entries: [[CRational; 2]; 2],
    pub symmetric: bool,
}

impl RationalMatrix2 {
    /// The symmetric flag is set when `c` and `b` agree at sample points.
    pub fn new(a: CRational, b: CRational, c: CRational, d: CRational) -> Self {
        let symmetric = sampled_equal(&b, &c, 1e-12);
        RationalMatrix2 {
            entries: [[a, b], [c, d]],
            symmetric,
        }
    }

    pub fn symmetric(a: CRational, b: CRational, d: CRational) -> Self {
        RationalMatrix2 {
            entries: [[a, b.clone()], [b, d]],
            symmetric: true,
        }
    }

    pub fn from_columns(first: &[CRational; 2], second: &[CRational; 2]) -> Self {
        Self::new(
            first[0].clone(),
            second[0].clone(),
            first[1].clone(),
            second[1].clone(),
        )
    }

    pub fn identity() -> Self {
        Self::symmetric(CRational::one(), CRational::zero(), CRational::one())
    }

    pub fn entry(&self, i: usize, j: usize) -> &CRational {
        &self.entries[i][j]
    }

    pub fn eval(&self, z: Complex64) -> CMat2 {
        let e = &self.entries;
        CMat2::new(e[0][0].eval(z), e[0][1].eval(z), e[1][0].eval(z), e[1][1].eval(z))
    }

    /// `max |det M - 1|` over fixed sample points, relative to the size of
    /// the two products.
    pub fn unit_det_defect(&self) -> f64 {
        PTS.iter()
            .map(|&z| {
                let m = self.eval(z);
                let size = (m[(0, 0)] * m[(1, 1)]).norm() + (m[(0, 1)] * m[(1, 0)]).norm();
                (m.determinant() - Complex64::new(1.0, 0.0)).norm() / size.max(1.0)
            })
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> CRational {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    /// Entrywise value at infinity; `None` if any entry is unbounded.
    pub fn at_infinity(&self) -> Option<CMat2> {
        let v = |r: &CRational| match r.eval_infinity() {
            AtInfinity::Finite(c) => Some(c),
            AtInfinity::Infinite => None,
        };
        let e = &self.entries;
        Some(CMat2::new(v(&e[0][0])?, v(&e[0][1])?, v(&e[1][0])?, v(&e[1][1])?))
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(&CRational) -> Result<CRational>) -> Result<Self> {
        let e = &self.entries;
        Ok(Self::new(f(&e[0][0])?, f(&e[0][1])?, f(&e[1][0])?, f(&e[1][1])?))
    }
}

/// Relative agreement at a fixed set of off-contour points.
pub fn sampled_equal(x: &CRational, y: &CRational, tol: f64) -> bool {
    sampled_defect(x, y) <= tol
}

const PTS: [Complex64; 6] = [
    Complex64::new(0.31, 0.77),
    Complex64::new(-0.62, 0.41),
    Complex64::new(0.93, -0.18),
    Complex64::new(-0.27, -0.88),
    Complex64::new(1.7, 0.9),
    Complex64::new(-2.3, -1.4),
];

pub fn sampled_defect(x: &CRational, y: &CRational) -> f64 {
    PTS.iter()
        .map(|&z| {
            let (u, v) = (x.eval(z), y.eval(z));
            (u - v).norm() / u.norm().max(v.norm()).max(1.0)
        })
        .fold(0.0, f64::max)
}
