//! The unit circle as an admissible contour for the involution `tau -> -lambda/tau`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_BAND: f64 = 1e-8;
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContourKind {
    UnitCircle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contour {
    pub kind: ContourKind,
    pub lambda: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Exterior,
    OnContour,
}

pub fn make_contour(lambda: i32) -> Result<Contour> {
    if lambda != 1 && lambda != -1 {
        return Err(Error::BadLambda(lambda));
    }
    let c = Contour {
        kind: ContourKind::UnitCircle,
        lambda,
    };
    debug_assert!(sample(&c, 16)
        .unwrap()
        .iter()
        .all(|&z| (c.involution(z).norm() - 1.0).abs() <= 1e-12));
    Ok(c)
}

impl Contour {
    /// `tau -> -lambda / tau`
    pub fn involution(&self, z: Complex64) -> Complex64 {
        -(self.lambda as f64) / z
    }

    pub fn classify(&self, z: Complex64) -> Region {
        classify_point(self, z, DEFAULT_BAND)
    }
}

pub fn classify_point(_c: &Contour, z: Complex64, band: f64) -> Region {
    let r = z.norm();
    if r < 1.0 - band {
        Region::Interior
    } else if r > 1.0 + band {
        Region::Exterior
    } else {
        Region::OnContour
    }
}

/// `n` equispaced points `e^{2 pi i k / n}`.
pub fn sample(_c: &Contour, n: usize) -> Result<Vec<Complex64>> {
    if n < 4 {
        return Err(Error::BadSampleCount(n));
    }
    Ok((0..n)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect())
}

pub fn check_branch_separation(
    _c: &Contour,
    t0: Complex64,
    t0tilde: Complex64,
    margin: f64,
) -> Result<()> {
    let (inner, outer) = (t0.norm(), t0tilde.norm());
    if inner < 1.0 - margin && outer > 1.0 + margin {
        Ok(())
    } else {
        Err(Error::BranchPointNearContour { inner, outer })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lambda_must_be_a_sign() {
        assert!(make_contour(1).is_ok());
        assert!(make_contour(-1).is_ok());
        assert!(matches!(make_contour(2), Err(Error::BadLambda(2))));
    }

    #[test]
    fn involutions() {
        let minus = make_contour(-1).unwrap();
        let plus = make_contour(1).unwrap();
        assert_eq!(minus.involution(c(2.0, 0.0)), c(0.5, 0.0));
        assert_eq!(plus.involution(c(2.0, 0.0)), c(-0.5, 0.0));
    }

    #[test]
    fn classification() {
        let k = make_contour(1).unwrap();
        assert_eq!(classify_point(&k, c(-0.5, 0.0), DEFAULT_BAND), Region::Interior);
        assert_eq!(classify_point(&k, c(2.0, 0.0), DEFAULT_BAND), Region::Exterior);
        assert_eq!(classify_point(&k, c(1.0, 0.0), DEFAULT_BAND), Region::OnContour);
        assert_eq!(k.classify(c(0.0, 1.0 + 1e-9)), Region::OnContour);
    }

    #[test]
    fn sampling() {
        let k = make_contour(1).unwrap();
        let s = sample(&k, 4).unwrap();
        for (z, e) in s.iter().zip([c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]) {
            assert!((z - e).norm() < 1e-15);
        }
        assert!(sample(&k, 2).is_err());
        let s = sample(&k, 8).unwrap();
        assert!((s[1] - Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn branch_separation() {
        let k = make_contour(1).unwrap();
        assert!(check_branch_separation(&k, c(-0.5, 0.0), c(2.0, 0.0), DEFAULT_MARGIN).is_ok());
        assert!(check_branch_separation(&k, c(0.99, 0.0), c(1.0 / 0.99, 0.0), DEFAULT_MARGIN).is_err());
        assert!(check_branch_separation(&k, c(-1.0 / 3.0, 0.0), c(-3.0, 0.0), DEFAULT_MARGIN).is_ok());
    }

    #[test]
    fn involution_swaps_sides() {
        for lambda in [1, -1] {
            let k = make_contour(lambda).unwrap();
            for z in sample(&k, 64).unwrap() {
                assert!((k.involution(z).norm() - 1.0).abs() < 1e-14);
                let inner = z * 0.6;
                assert_eq!(k.classify(k.involution(inner)), Region::Exterior);
            }
        }
    }
}
