use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::TRIM_TOL;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Complex polynomial, coefficients in ascending degree.
///
/// The leading coefficient is always significant: anything at or below
/// `TRIM_TOL` times the largest coefficient magnitude is dropped from the top.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = CPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `tau^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        CPoly { coeffs }
    }

    /// Monic polynomial with the given roots (repeated roots listed repeatedly).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![ONE];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        CPoly { coeffs }
    }

    fn trim(&mut self) {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        let cut = TRIM_TOL * max;
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= cut {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `tau^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `sum |a_k| |z|^k`, the natural scale for rounding error in `eval`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.lead();
        let mut coeffs: Vec<_> = self.coeffs.iter().map(|&c| c / lead).collect();
        *coeffs.last_mut().unwrap() = ONE;
        CPoly { coeffs }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &CPoly) -> (CPoly, CPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.lead();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
        rem.truncate(dd);
        // The remainder keeps raw coefficients: its size relative to the
        // dividend is what callers test.
        let rem = CPoly { coeffs: rem };
        (CPoly::new(quot), rem.strip_exact_zeros())
    }

    fn strip_exact_zeros(mut self) -> Self {
        while self.coeffs.last() == Some(&ZERO) {
            self.coeffs.pop();
        }
        self
    }

    /// Synthetic division by `(tau - z)`: returns the quotient and `p(z)`.
    pub fn deflate(&self, z: Complex64) -> (CPoly, Complex64) {
        let Some(n) = self.degree() else {
            return (Self::zero(), ZERO);
        };
        if n == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut quot = vec![ZERO; n];
        let mut acc = self.coeffs[n];
        for k in (0..n).rev() {
            quot[k] = acc;
            acc = acc * z + self.coeffs[k];
        }
        (CPoly { coeffs: quot }, acc)
    }

    /// Division by `tau - z` in the numerically stable direction: from the
    /// top for `|z| <= 1`, from the bottom otherwise.  The second value is
    /// the mismatch left at the opposite end, zero for an exact root.
    pub fn deflate_stable(&self, z: Complex64) -> (CPoly, Complex64) {
        if z.norm() <= 1.0 {
            return self.deflate(z);
        }
        let Some(n) = self.degree() else {
            return (Self::zero(), ZERO);
        };
        if n == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut quot = vec![ZERO; n];
        quot[0] = -self.coeffs[0] / z;
        for k in 1..n {
            quot[k] = (quot[k - 1] - self.coeffs[k]) / z;
        }
        let mismatch = self.coeffs[n] - quot[n - 1];
        (CPoly { coeffs: quot }, mismatch)
    }

    /// Quotient by `prod (tau - r)` over `roots`, deflating one root at a
    /// time.  Also returns the largest mismatch relative to the size of the
    /// polynomial being deflated.
    pub fn divide_by_roots(&self, roots: &[Complex64]) -> (CPoly, f64) {
        let mut p = self.clone();
        let mut worst: f64 = 0.0;
        for &r in roots {
            let size = p.norm_inf();
            let (q, m) = p.deflate_stable(r);
            if size > 0.0 {
                worst = worst.max(m.norm() / size);
            }
            p = CPoly::new(q.coeffs);
        }
        (p, worst)
    }

    /// Coefficients `c_0 .. c_{n-1}` of the polynomial taking `values[j]` at
    /// `exp(2 pi i j / n)`.
    pub fn interpolate_roots_of_unity(values: &[Complex64]) -> Vec<Complex64> {
        let n = values.len();
        (0..n)
            .map(|k| {
                values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let theta = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                        v * Complex64::from_polar(1.0, theta)
                    })
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    /// Coefficients of `p(z + t)` as a polynomial in `t`.
    pub fn shift(&self, z: Complex64) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let next = c[k + 1];
                c[k] += z * next;
            }
        }
        CPoly::new(c)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Coefficients reversed: `tau^n p(1/tau)` with `n` the degree.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        CPoly::new(c)
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CPoly {
            type Output = CPoly;
            fn $m(self, rhs: CPoly) -> CPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
