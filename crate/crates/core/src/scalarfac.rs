//! Canonical factorisation of scalar rational functions, `r = minus * plus`.

use num_complex::Complex64;

use crate::contour::{Contour, Region};
use crate::error::{Error, Result};
use crate::ratfun::{CPoly, CRational, RootCluster};

#[derive(Clone, Debug)]
pub struct ScalarFactorization {
    /// Zeros and poles in the interior; constant at infinity.
    pub minus: CRational,
    /// Zeros and poles in the exterior; equal to 1 at the origin.
    pub plus: CRational,
    pub winding: i64,
}

struct Split {
    interior_zeros: Vec<RootCluster>,
    exterior_zeros: Vec<RootCluster>,
    interior_poles: Vec<RootCluster>,
    exterior_poles: Vec<RootCluster>,
}

fn split(r: &CRational, c: &Contour) -> Result<Split> {
    let mut s = Split {
        interior_zeros: Vec::new(),
        exterior_zeros: Vec::new(),
        interior_poles: Vec::new(),
        exterior_poles: Vec::new(),
    };
    for (clusters, inner, outer) in [
        (r.zeros()?, &mut s.interior_zeros, &mut s.exterior_zeros),
        (r.poles()?, &mut s.interior_poles, &mut s.exterior_poles),
    ] {
        for cl in clusters {
            match c.classify(cl.location) {
                Region::Interior => inner.push(cl),
                Region::Exterior => outer.push(cl),
                Region::OnContour => {
                    return Err(Error::ZeroOnContour {
                        location: cl.location,
                    })
                }
            }
        }
    }
    Ok(s)
}

fn count(clusters: &[RootCluster]) -> i64 {
    clusters.iter().map(|c| c.multiplicity as i64).sum()
}

fn expand(clusters: &[RootCluster]) -> CPoly {
    let roots: Vec<Complex64> = clusters
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.location, c.multiplicity))
        .collect();
    CPoly::from_roots(&roots)
}

/// Interior zeros minus interior poles, with multiplicity.
pub fn winding_number(r: &CRational, c: &Contour) -> Result<i64> {
    let s = split(r, c)?;
    Ok(count(&s.interior_zeros) - count(&s.interior_poles))
}

pub fn scalar_canonical_factorize(r: &CRational, c: &Contour) -> Result<ScalarFactorization> {
    if r.is_zero() {
        return Err(Error::ZeroOnContour {
            location: Complex64::new(1.0, 0.0),
        });
    }
    let s = split(r, c)?;
    let winding = count(&s.interior_zeros) - count(&s.interior_poles);
    if winding != 0 {
        return Err(Error::NonZeroWinding(winding));
    }

    let plus_den = expand(&s.exterior_poles);
    let raw = expand(&s.exterior_zeros);
    // Rescale so that the constant terms agree exactly: plus(0) = 1 bit for bit.
    let d0 = plus_den.coeff(0);
    let mut coeffs: Vec<Complex64> = raw.scale(d0 / raw.coeff(0)).coeffs().to_vec();
    coeffs[0] = d0;
    let plus = CRational::from_parts(CPoly::new(coeffs), plus_den);

    let minus_num = expand(&s.interior_zeros);
    let minus_den = expand(&s.interior_poles);
    let gauge = r.num().lead() / plus.num().lead();
    let minus = CRational::from_parts(minus_num.scale(gauge), minus_den);

    Ok(ScalarFactorization {
        minus,
        plus,
        winding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{make_contour, sample};

    fn rat(num: &[f64], den: &[f64]) -> CRational {
        CRational::new(CPoly::from_real(num), CPoly::from_real(den)).unwrap()
    }

    #[test]
    fn winding_examples() {
        let k = make_contour(1).unwrap();
        assert_eq!(winding_number(&rat(&[-2.0, 1.0], &[-3.0, 1.0]), &k).unwrap(), 0);
        assert_eq!(winding_number(&rat(&[-2.0, 1.0], &[-1.0, 2.0]), &k).unwrap(), -1);
        assert_eq!(winding_number(&CRational::one(), &k).unwrap(), 0);
        assert!(matches!(
            winding_number(&rat(&[-1.0, 1.0], &[3.0, 1.0]), &k),
            Err(Error::ZeroOnContour { .. })
        ));
    }

    #[test]
    fn identity() {
        let k = make_contour(-1).unwrap();
        let f = scalar_canonical_factorize(&CRational::one(), &k).unwrap();
        assert_eq!(f.plus, CRational::one());
        assert_eq!(f.minus, CRational::one());
    }

    #[test]
    fn split_and_round_trip() {
        let k = make_contour(1).unwrap();
        // zeros at 2 and 0.25, poles at 3 and -0.5
        let r = CRational::new(
            CPoly::from_real(&[0.5, -2.25, 1.0]).scale(Complex64::new(3.0, 1.0)),
            CPoly::from_real(&[-1.5, -2.5, 1.0]),
        )
        .unwrap();
        let f = scalar_canonical_factorize(&r, &k).unwrap();
        assert_eq!(f.plus.eval(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        for z in sample(&k, 64).unwrap() {
            let prod = f.minus.eval(z) * f.plus.eval(z);
            assert!((prod - r.eval(z)).norm() < 1e-10 * r.eval(z).norm());
        }
        for cl in f.plus.zeros().unwrap().into_iter().chain(f.plus.poles().unwrap()) {
            assert_eq!(k.classify(cl.location), Region::Exterior);
        }
        for cl in f.minus.zeros().unwrap().into_iter().chain(f.minus.poles().unwrap()) {
            assert_eq!(k.classify(cl.location), Region::Interior);
        }
    }

    #[test]
    fn obstructed() {
        let k = make_contour(1).unwrap();
        assert!(matches!(
            scalar_canonical_factorize(&rat(&[-2.0, 1.0], &[-1.0, 2.0]), &k),
            Err(Error::NonZeroWinding(-1))
        ));
    }
}
