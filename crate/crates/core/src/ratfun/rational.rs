use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::CPoly;
use super::roots::{poly_roots, RootCluster};
use super::{CANCEL_TOL, DEFAULT_CLUSTER_TOL, ROOT_SLACK};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Value of a rational function at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AtInfinity {
    Finite(Complex64),
    Infinite,
}

impl AtInfinity {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            AtInfinity::Finite(c) => Some(c),
            AtInfinity::Infinite => None,
        }
    }
}

/// Rational function `num / den` with a monic denominator and no common
/// root clusters.
#[derive(Clone, PartialEq)]
pub struct CRational {
    num: CPoly,
    den: CPoly,
}

impl CRational {
    /// Cancels common roots and makes the denominator monic.
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (num, den) = cancel_common(num, den);
        let lead = den.lead();
        let num = if lead == ONE { num } else { num.scale(lead.inv()) };
        Ok(CRational {
            num,
            den: den.monic(),
        })
    }

    /// Makes the denominator monic but keeps every root, so a written-out
    /// `num/den` pair comes back unchanged.
    pub fn from_coeffs(num: CPoly, den: CPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let lead = den.lead();
        Ok(CRational {
            num: num.scale(lead.inv()),
            den: den.monic(),
        })
    }

    /// Trusts the caller: `den` monic and coprime to `num`.
    pub(crate) fn from_parts(num: CPoly, den: CPoly) -> Self {
        debug_assert!(den.lead() == ONE);
        CRational { num, den }
    }

    pub fn from_poly(p: CPoly) -> Self {
        CRational {
            num: p,
            den: CPoly::one(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_poly(CPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(CPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The identity function `tau`.
    pub fn tau() -> Self {
        Self::from_poly(CPoly::monomial(1))
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn eval_infinity(&self) -> AtInfinity {
        let Some(dn) = self.num.degree() else {
            return AtInfinity::Finite(ZERO);
        };
        let dd = self.den.degree().unwrap();
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => AtInfinity::Finite(ZERO),
            std::cmp::Ordering::Equal => AtInfinity::Finite(self.num.lead() / self.den.lead()),
            std::cmp::Ordering::Greater => AtInfinity::Infinite,
        }
    }

    pub fn is_bounded_at_infinity(&self) -> bool {
        self.eval_infinity() != AtInfinity::Infinite
    }

    pub fn zeros(&self) -> Result<Vec<RootCluster>> {
        roots_or_empty(&self.num)
    }

    pub fn poles(&self) -> Result<Vec<RootCluster>> {
        roots_or_empty(&self.den)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &CRational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if self.den == rhs.den {
            return Self::new(self.num.clone(), rhs.num.clone());
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, k: usize) -> Self {
        CRational {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// First `n` Taylor coefficients at a point that is not a pole.
    pub fn series_at(&self, z: Complex64, n: usize) -> Vec<Complex64> {
        series_div(self.num.shift(z).coeffs(), self.den.shift(z).coeffs(), n)
    }

    /// First `n` coefficients of `r(1/w)` in powers of `w`, for `r` bounded
    /// at infinity.
    pub fn series_at_infinity(&self, n: usize) -> Result<Vec<Complex64>> {
        let Some(dn) = self.num.degree() else {
            return Ok(vec![ZERO; n]);
        };
        let dd = self.den.degree().unwrap();
        if dn > dd {
            return Err(Error::UnboundedAtInfinity);
        }
        let mut num: Vec<Complex64> = vec![ZERO; dd - dn];
        num.extend(self.num.coeffs().iter().rev());
        let den: Vec<Complex64> = self.den.coeffs().iter().rev().copied().collect();
        Ok(series_div(&num, &den, n))
    }

    /// `self(inner(tau))`.
    pub fn compose(&self, inner: &CRational) -> Result<Self> {
        let m = self.num.coeffs().len().max(self.den.coeffs().len());
        if m == 0 {
            return Ok(Self::zero());
        }
        let p_pows: Vec<CPoly> = powers(&inner.num, m);
        let q_pows: Vec<CPoly> = powers(&inner.den, m);
        let lift = |c: &[Complex64]| {
            c.iter().enumerate().fold(CPoly::zero(), |acc, (k, &a)| {
                &acc + &(&p_pows[k] * &q_pows[m - 1 - k]).scale(a)
            })
        };
        Self::new(lift(self.num.coeffs()), lift(self.den.coeffs()))
    }
}

fn powers(p: &CPoly, m: usize) -> Vec<CPoly> {
    let mut out = Vec::with_capacity(m);
    let mut acc = CPoly::one();
    for _ in 0..m {
        out.push(acc.clone());
        acc = &acc * p;
    }
    out
}

fn series_div(num: &[Complex64], den: &[Complex64], n: usize) -> Vec<Complex64> {
    let b0 = den[0];
    let mut c = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num.get(k).copied().unwrap_or(ZERO);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= den[j] * c[k - j];
        }
        c.push(acc / b0);
    }
    c
}

fn roots_or_empty(p: &CPoly) -> Result<Vec<RootCluster>> {
    match p.degree() {
        Some(d) if d >= 1 => poly_roots(p, DEFAULT_CLUSTER_TOL),
        _ => Ok(Vec::new()),
    }
}

/// Inside a cluster the first-order estimate below is meaningless.
const MAX_ROOT_ERROR: f64 = 1e-10;

/// First-order size of the error in a computed root of `p` of the given
/// multiplicity.
fn root_uncertainty(p: &CPoly, z: Complex64, multiplicity: usize) -> f64 {
    let mut d = p.clone();
    let mut fact = 1.0;
    for k in 1..=multiplicity {
        d = d.derivative();
        fact *= k as f64;
    }
    let slope = d.eval(z).norm() / fact;
    let cap = MAX_ROOT_ERROR * z.norm().max(1.0);
    if slope == 0.0 {
        return cap;
    }
    (f64::EPSILON * p.eval_scale(z) / slope).powf(1.0 / multiplicity as f64).min(cap)
}

fn cancel_common(mut num: CPoly, mut den: CPoly) -> (CPoly, CPoly) {
    if den.degree().unwrap_or(0) == 0 || num.degree().unwrap_or(0) == 0 {
        return (num, den);
    }
    // A root finder failure leaves the pair unreduced; it still represents
    // the same function.
    let Ok(clusters) = poly_roots(&den, DEFAULT_CLUSTER_TOL) else {
        return (num, den);
    };
    for cl in clusters {
        let z = cl.location;
        let delta = root_uncertainty(&den, z, cl.multiplicity);
        for _ in 0..cl.multiplicity {
            if num.degree().unwrap_or(0) == 0 {
                return (num, den);
            }
            // the residue allowed for a root known only to within delta
            let slack = ROOT_SLACK * num.derivative().eval(z).norm() * delta;
            if num.eval(z).norm() > CANCEL_TOL * num.eval_scale(z) + slack {
                break;
            }
            num = num.deflate_stable(z).0;
            den = den.deflate_stable(z).0;
        }
    }
    (num, den)
}

impl fmt::Debug for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] / [{:?}]", self.num, self.den)
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, rhs: &CRational) -> CRational {
        if self.den == rhs.den {
            return CRational::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        CRational::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, rhs: &CRational) -> CRational {
        self + &(-rhs)
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, rhs: &CRational) -> CRational {
        CRational::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CRational {
            type Output = CRational;
            fn $m(self, rhs: CRational) -> CRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<CPoly> for CRational {
    fn from(p: CPoly) -> Self {
        Self::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rat(num: &[f64], den: &[f64]) -> CRational {
        CRational::new(CPoly::from_real(num), CPoly::from_real(den)).unwrap()
    }

    fn close(a: &CRational, b: &CRational, pts: &[Complex64]) -> bool {
        pts.iter().all(|&z| {
            let (x, y) = (a.eval(z), b.eval(z));
            (x - y).norm() <= 1e-11 * (1.0 + x.norm().max(y.norm()))
        })
    }

    const PTS: [Complex64; 4] = [
        Complex64::new(0.3, 0.9),
        Complex64::new(-1.7, 0.2),
        Complex64::new(2.5, -1.1),
        Complex64::new(0.05, -0.4),
    ];

    #[test]
    fn normalize_cancels() {
        let r = rat(&[-1.0, 0.0, 1.0], &[-1.0, 1.0]);
        assert_eq!(r.den().degree(), Some(0));
        assert!((&r.num().clone() - &CPoly::from_real(&[1.0, 1.0])).norm_inf() < 1e-14);

        let r = rat(&[0.0, 2.0], &[2.0]);
        assert_eq!(r.num(), &CPoly::from_real(&[0.0, 1.0]));
        assert_eq!(r.den(), &CPoly::one());
    }

    #[test]
    fn normalize_double_pole_half_cancels() {
        // tau (tau - 4)(tau - 2)(-1/2) / (tau - 2)^2
        let num = CPoly::from_roots(&[c(0.0, 0.0), c(4.0, 0.0), c(2.0, 0.0)]).scale(c(-0.5, 0.0));
        let den = CPoly::from_roots(&[c(2.0, 0.0), c(2.0, 0.0)]);
        let r = CRational::new(num, den).unwrap();
        assert_eq!(r.den().degree(), Some(1));
        let expect = |z: Complex64| -z * (z - 4.0) / (2.0 * (z - 2.0));
        for z in PTS {
            assert!((r.eval(z) - expect(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_denominator() {
        assert!(matches!(
            CRational::new(CPoly::one(), CPoly::zero()),
            Err(Error::ZeroDenominator)
        ));
        assert!(CRational::one().checked_div(&CRational::zero()).is_err());
    }

    #[test]
    fn arithmetic() {
        let inv_tau = rat(&[1.0], &[0.0, 1.0]);
        let sum = &inv_tau + &CRational::tau();
        assert!(close(&sum, &rat(&[1.0, 0.0, 1.0], &[0.0, 1.0]), &PTS));

        let q = rat(&[1.0, 2.0, 0.5], &[3.0, -1.0, 1.0]);
        let one = &q * &q.recip().unwrap();
        assert_eq!(one.num().degree(), Some(0));
        assert!((one.eval(c(0.7, 0.1)) - ONE).norm() < 1e-12);
    }

    #[test]
    fn infinity() {
        assert_eq!(rat(&[1.0], &[0.0, 1.0]).eval_infinity(), AtInfinity::Finite(ZERO));
        assert_eq!(rat(&[0.0, 1.0], &[2.0, 4.0]).eval_infinity(), AtInfinity::Finite(c(0.25, 0.0)));
        // tau^2 / tau reduces to tau
        assert_eq!(rat(&[0.0, 0.0, 1.0], &[0.0, 1.0]).eval_infinity(), AtInfinity::Infinite);
    }

    #[test]
    fn series() {
        let r = rat(&[1.0], &[1.0, -1.0]);
        let s = r.series_at(c(0.0, 0.0), 4);
        for k in 0..4 {
            assert!((s[k] - ONE).norm() < 1e-15);
        }
        // tau / (4 tau + 2) = 1/4 - (1/8) w + ...
        let r = rat(&[0.0, 1.0], &[2.0, 4.0]);
        let s = r.series_at_infinity(3).unwrap();
        assert!((s[0] - c(0.25, 0.0)).norm() < 1e-15);
        assert!((s[1] - c(-0.125, 0.0)).norm() < 1e-15);
        assert!(CRational::tau().series_at_infinity(2).is_err());
        // Taylor expansion at a shifted point
        let r = rat(&[1.0, 2.0], &[3.0, 0.0, 1.0]);
        let z0 = c(0.5, -0.5);
        let s = r.series_at(z0, 12);
        let t = c(0.05, 0.02);
        let approx: Complex64 = s.iter().rev().fold(ZERO, |acc, &a| acc * t + a);
        assert!((approx - r.eval(z0 + t)).norm() < 1e-13);
    }

    #[test]
    fn composition() {
        let outer = rat(&[1.0, 0.0, 3.0], &[0.0, 1.0]);
        let inner = rat(&[2.0, 1.0, -1.0], &[0.0, 1.0]);
        let comp = outer.compose(&inner).unwrap();
        for z in PTS {
            let w = inner.eval(z);
            assert!((comp.eval(z) - outer.eval(w)).norm() < 1e-11 * (1.0 + outer.eval(w).norm()));
        }
    }
}
