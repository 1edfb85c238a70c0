mod common;

use common::{c, eps_spec, MARGIN};
use symwh::gravity::{self, CustomEntries, MonodromySpec, Variable};
use symwh::scalarfac::scalar_canonical_factorize;
use symwh::whsym::{classify_r1_zeros, R1};
use symwh::{factorize, make_contour, CPoly, CRational, Error, RationalMatrix2};

fn inv_tau() -> CRational {
    CRational::new(CPoly::one(), CPoly::monomial(1)).unwrap()
}

fn obstructed_scalar() -> CRational {
    CRational::new(CPoly::from_real(&[-2.0, 1.0]), CPoly::from_real(&[-1.0, 2.0])).unwrap()
}

#[test]
fn scalar_with_winding() {
    let k = make_contour(1).unwrap();
    let err = scalar_canonical_factorize(&obstructed_scalar(), &k).unwrap_err();
    assert!(matches!(err, Error::NonZeroWinding(-1)), "{err}");
    assert!(err.is_non_canonical());
}

#[test]
fn matrix_with_winding_determinant() {
    let k = make_contour(1).unwrap();
    let m = RationalMatrix2::symmetric(obstructed_scalar(), CRational::zero(), CRational::one());
    assert!(matches!(factorize(&m, &k), Err(Error::NonZeroWinding(_))));
}

#[test]
fn nonzero_partial_indices() {
    let k = make_contour(1).unwrap();
    for m in [
        RationalMatrix2::symmetric(CRational::tau(), CRational::zero(), inv_tau()),
        RationalMatrix2::symmetric(inv_tau(), CRational::zero(), CRational::tau()),
    ] {
        let err = factorize(&m, &k).unwrap_err();
        assert!(matches!(err, Error::NonCanonical(_)), "{err}");
    }
}

#[test]
fn triple_zero_of_r1() {
    let k = make_contour(1).unwrap();
    let p2 = CPoly::from_real(&[1.0, 0.0, 0.0, 5.0]);
    let r1 = R1::from_ptilde1(CPoly::monomial(3), &p2).unwrap();
    let err = classify_r1_zeros(&r1, &k).unwrap_err();
    assert!(matches!(err, Error::UnsupportedMultiplicity { multiplicity: 3, .. }), "{err}");
}

#[test]
fn perturbed_symmetry() {
    let base = eps_spec().base_matrix();
    let e = &base.entries;
    let entries = CustomEntries {
        a: e[0][0].clone(),
        b: e[0][1].clone(),
        c: &e[1][0] + &CRational::constant(c(1e-3)),
        d: e[1][1].clone(),
        variable: Variable::Omega,
    };
    let spec = MonodromySpec::custom(entries, 1).unwrap();
    let err = gravity::factorize_point(&spec, 4.0, 3.0, MARGIN).unwrap_err();
    assert!(matches!(err, Error::NotSymmetric { .. }), "{err}");
}

#[test]
fn degenerate_branch_point() {
    let cs = MonodromySpec::aiii_cs(c(2f64.sqrt()), c(1.0)).unwrap();
    let err = gravity::factorize_point(&cs, 3.0, 3.0, MARGIN).unwrap_err();
    assert!(matches!(err, Error::DegenerateBranch { .. }), "{err}");
}
