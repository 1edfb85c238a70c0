//! Monodromy matrices on the spectral curve
//! `omega = v + (lambda/2) rho (lambda - tau^2) / tau` and the axis matrix
//! `M(rho, v) = M-(infinity)` of their canonical factorisation.

mod closed;
mod fields;

pub use closed::ClosedFields;
pub use fields::{
    calibrate, conformal_psi, field_residual, gradients, integrate_column, integrate_path,
    path_increment, twist_b, Calibration, Gradients, MetricFields, QuadratureOptions,
};

use num_complex::Complex64;

use crate::contour::{check_branch_separation, make_contour, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::matrix::{CMat2, RationalMatrix2};
use crate::ratfun::{CPoly, CRational};
use crate::whsym::{factorize, Factorization};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Independent variable of custom entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    /// Entries are functions of `omega`, substituted on the spectral curve.
    Omega,
    /// Entries are already functions of `tau` and ignore `(rho, v)`.
    Tau,
}

#[derive(Clone, Debug)]
pub struct CustomEntries {
    pub a: CRational,
    pub b: CRational,
    /// The (2,1) entry, normally equal to `b`.
    pub c: CRational,
    pub d: CRational,
    pub variable: Variable,
}

#[derive(Clone, Debug)]
pub enum Family {
    /// `[[c^2/w + s^2 w, cs(1/w + w)], [cs(1/w + w), c^2 w + s^2/w]]`, `c^2 - s^2 = 1`
    AiiiCs { c: Complex64, s: Complex64 },
    /// `[[1/w, eps/w], [eps/w, w + eps^2/w]]`
    AiiiEps { eps: Complex64 },
    Custom(CustomEntries),
}

#[derive(Clone, Debug)]
pub struct MonodromySpec {
    pub family: Family,
    pub lambda: i32,
}

impl MonodromySpec {
    pub fn aiii_cs(c: Complex64, s: Complex64) -> Result<Self> {
        let defect = (c * c - s * s - ONE).norm();
        if defect > 1e-12 {
            return Err(Error::InvalidInput(format!("c^2 - s^2 = 1 violated by {defect:e}")));
        }
        Ok(MonodromySpec {
            family: Family::AiiiCs { c, s },
            lambda: -1,
        })
    }

    pub fn aiii_eps(eps: Complex64) -> Self {
        MonodromySpec {
            family: Family::AiiiEps { eps },
            lambda: 1,
        }
    }

    pub fn custom(entries: CustomEntries, lambda: i32) -> Result<Self> {
        make_contour(lambda)?;
        Ok(MonodromySpec {
            family: Family::Custom(entries),
            lambda,
        })
    }

    /// Whether the matrix depends on `(rho, v)` through the spectral curve.
    pub fn uses_spectral_curve(&self) -> bool {
        !matches!(
            self.family,
            Family::Custom(CustomEntries {
                variable: Variable::Tau,
                ..
            })
        )
    }

    /// Entries as rational functions of `omega` (or of `tau` for custom
    /// `Tau` entries).
    pub fn base_matrix(&self) -> RationalMatrix2 {
        let w = CRational::tau();
        let inv = CRational::new(CPoly::one(), CPoly::monomial(1)).unwrap();
        let k = CRational::constant;
        match &self.family {
            Family::AiiiCs { c, s } => {
                let (c2, s2, cs) = (c * c, s * s, c * s);
                let a = &inv.scale(c2) + &w.scale(s2);
                let b = (&inv + &w).scale(cs);
                let d = &w.scale(c2) + &inv.scale(s2);
                RationalMatrix2::symmetric(a, b, d)
            }
            Family::AiiiEps { eps } => {
                let a = inv.clone();
                let b = inv.scale(*eps);
                let d = &w + &(&inv * &k(eps * eps));
                RationalMatrix2::symmetric(a, b, d)
            }
            Family::Custom(e) => {
                RationalMatrix2::new(e.a.clone(), e.b.clone(), e.c.clone(), e.d.clone())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub rho: f64,
    pub v: f64,
    pub lambda: i32,
    pub tau0: Complex64,
    pub tau0tilde: Complex64,
}

/// Zeros of `omega`: `tau0` inside the unit circle, `tau0tilde` outside.
pub fn branch_points(rho: f64, v: f64, lambda: i32) -> Result<SpectralPoint> {
    branch_points_with_margin(rho, v, lambda, DEFAULT_MARGIN)
}

pub fn branch_points_with_margin(rho: f64, v: f64, lambda: i32, margin: f64) -> Result<SpectralPoint> {
    let contour = make_contour(lambda)?;
    if !(rho > 0.0) || !v.is_finite() {
        return Err(Error::InvalidInput(format!("need rho > 0, got ({rho}, {v})")));
    }
    let (a, b) = if lambda == 1 {
        let r = Complex64::new((v * v + rho * rho).sqrt(), 0.0);
        ((v - r) / rho, (v + r) / rho)
    } else {
        let r = Complex64::new(v * v - rho * rho, 0.0).sqrt();
        ((r - v) / rho, (-r - v) / rho)
    };
    // The roots multiply to -lambda; the smaller one is interior.
    let (tau0, tau0tilde) = if a.norm() <= b.norm() { (a, b) } else { (b, a) };
    check_branch_separation(&contour, tau0, tau0tilde, margin)
        .map_err(|_| Error::DegenerateBranch { rho, v })?;
    Ok(SpectralPoint {
        rho,
        v,
        lambda,
        tau0,
        tau0tilde,
    })
}

impl SpectralPoint {
    /// `omega(tau) = (rho/2 + v tau - (lambda rho/2) tau^2) / tau`
    pub fn omega(&self) -> CRational {
        let l = self.lambda as f64;
        let num = CPoly::from_real(&[self.rho / 2.0, self.v, -l * self.rho / 2.0]);
        CRational::new(num, CPoly::monomial(1)).unwrap()
    }
}

/// `omega = m- m+` with `m+ = 1 - tau/tau0tilde` and
/// `m- = (lambda rho/2) tau0tilde (tau - tau0) / tau`.
pub fn blaschke_factors(sp: &SpectralPoint) -> (CRational, CRational) {
    let m_plus = CRational::from_poly(CPoly::new(vec![ONE, -sp.tau0tilde.inv()]));
    let k = sp.tau0tilde * (sp.lambda as f64 * sp.rho / 2.0);
    let m_minus = CRational::new(
        CPoly::new(vec![-sp.tau0 * k, k]),
        CPoly::monomial(1),
    )
    .unwrap();
    (m_minus, m_plus)
}

/// The monodromy matrix as a function of `tau` at `(rho, v)`.
pub fn spectral_substitute(spec: &MonodromySpec, sp: &SpectralPoint) -> Result<RationalMatrix2> {
    let base = spec.base_matrix();
    if !spec.uses_spectral_curve() {
        return Ok(base);
    }
    let omega = sp.omega();
    let symmetric = base.symmetric;
    let mut m = base.map(|e| e.compose(&omega))?;
    m.symmetric = symmetric && m.symmetric;
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct PointSolution {
    pub point: Option<SpectralPoint>,
    pub matrix: RationalMatrix2,
    pub fact: Factorization,
}

pub fn factorize_point(spec: &MonodromySpec, rho: f64, v: f64, margin: f64) -> Result<PointSolution> {
    let contour = make_contour(spec.lambda)?;
    let (point, matrix) = if spec.uses_spectral_curve() {
        let sp = branch_points_with_margin(rho, v, spec.lambda, margin)?;
        (Some(sp), spectral_substitute(spec, &sp)?)
    } else {
        (None, spec.base_matrix())
    };
    let fact = factorize(&matrix, &contour)?;
    Ok(PointSolution { point, matrix, fact })
}

/// `M-` at infinity; symmetric with unit determinant.
pub fn axis_matrix(fact: &Factorization) -> Result<CMat2> {
    let m = fact.mminus.at_infinity().ok_or(Error::UnboundedAtInfinity)?;
    let scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let residual = (m[(0, 1)] - m[(1, 0)]).norm() / scale;
    if residual > 1e-9 {
        return Err(Error::NotSymmetric { residual });
    }
    let defect = (m.determinant() - ONE).norm();
    if defect > 1e-9 * scale * scale {
        return Err(Error::DeterminantNotUnit { defect });
    }
    Ok(m)
}

pub fn axis_at(spec: &MonodromySpec, rho: f64, v: f64, margin: f64) -> Result<CMat2> {
    axis_matrix(&factorize_point(spec, rho, v, margin)?.fact)
}

/// `Delta = 1 / M22` (real part).
pub fn metric_delta(axis: &CMat2) -> Result<f64> {
    let m22 = axis[(1, 1)];
    let scale = axis.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if m22.norm() <= 1e-14 * scale || m22.norm() == 0.0 {
        return Err(Error::ZeroEntry);
    }
    Ok(m22.inv().re)
}

/// `chi = M12 / M22`
pub fn twist_potential(axis: &CMat2) -> Result<f64> {
    let m22 = axis[(1, 1)];
    if m22.norm() == 0.0 {
        return Err(Error::ZeroEntry);
    }
    Ok((axis[(0, 1)] / m22).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn branch_point_examples() {
        let sp = branch_points(4.0, 3.0, 1).unwrap();
        assert!((sp.tau0 - c(-0.5)).norm() < 1e-15 && (sp.tau0tilde - c(2.0)).norm() < 1e-15);
        let sp = branch_points(3.0, 5.0, -1).unwrap();
        assert!((sp.tau0 - c(-1.0 / 3.0)).norm() < 1e-15);
        assert!((sp.tau0tilde - c(-3.0)).norm() < 1e-15);
        assert!(matches!(branch_points(1.0, 1.0, -1), Err(Error::DegenerateBranch { .. })));
    }

    #[test]
    fn spectral_point_invariants() {
        for (rho, v, l) in [(4.0, 3.0, 1), (3.0, 5.0, -1), (0.7, -2.0, 1), (1.0, 2.5, -1)] {
            let sp = branch_points(rho, v, l).unwrap();
            let w = sp.omega();
            assert!(w.eval(sp.tau0).norm() < 1e-10 && w.eval(sp.tau0tilde).norm() < 1e-10);
            if l == 1 {
                assert!((sp.tau0tilde + sp.tau0.inv()).norm() < 1e-12);
            } else {
                assert!((sp.tau0 * sp.tau0tilde - ONE).norm() < 1e-12);
                assert!((sp.tau0 + sp.tau0tilde + 2.0 * v / rho).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn blaschke_examples() {
        let sp = branch_points(4.0, 3.0, 1).unwrap();
        let (mm, mp) = blaschke_factors(&sp);
        assert_eq!(mp.eval(Complex64::new(0.0, 0.0)), ONE);
        let z = Complex64::new(0.3, 0.8);
        assert!((mp.eval(z) - (ONE - z / 2.0)).norm() < 1e-15);
        assert!((mm.eval(z) - 4.0 * (z + 0.5) / z).norm() < 1e-14);
        assert!((mm.eval_infinity().finite().unwrap() - c(4.0)).norm() < 1e-15);
        let prod = &mm * &mp;
        assert!((prod.eval(z) - sp.omega().eval(z)).norm() < 1e-12);

        let sp = branch_points(3.0, 5.0, -1).unwrap();
        let (mm, mp) = blaschke_factors(&sp);
        assert!((mp.eval(z) - (ONE + z / 3.0)).norm() < 1e-15);
        assert!((mm.eval_infinity().finite().unwrap() - c(4.5)).norm() < 1e-14);
        assert!(((&mm * &mp).eval(z) - sp.omega().eval(z)).norm() < 1e-12);
    }

    #[test]
    fn substituted_entries() {
        let spec = MonodromySpec::aiii_eps(c(1.0));
        let sp = branch_points(4.0, 3.0, 1).unwrap();
        let m = spectral_substitute(&spec, &sp).unwrap();
        let z = Complex64::new(0.2, -0.9);
        let expect = -z / (2.0 * (z + 0.5) * (z - 2.0));
        assert!((m.entry(0, 0).eval(z) - expect).norm() < 1e-14);
        assert!(m.symmetric);

        let spec = MonodromySpec::aiii_cs(c(2f64.sqrt()), c(1.0)).unwrap();
        let sp = branch_points(3.0, 5.0, -1).unwrap();
        let m = spectral_substitute(&spec, &sp).unwrap();
        let w = sp.omega().eval(z);
        assert!((m.entry(0, 1).eval(z) - 2f64.sqrt() * (1.0 / w + w)).norm() < 1e-12);
        let det = m.eval(z).determinant();
        assert!((det - ONE).norm() < 1e-12);
    }

    #[test]
    fn metric_delta_examples() {
        let axis = CMat2::new(c(0.25), c(0.25), c(0.25), c(4.25));
        assert!((metric_delta(&axis).unwrap() - 4.0 / 17.0).abs() < 1e-15);
        let zero = CMat2::new(c(1.0), c(0.0), c(0.0), c(0.0));
        assert!(matches!(metric_delta(&zero), Err(Error::ZeroEntry)));
    }
}
