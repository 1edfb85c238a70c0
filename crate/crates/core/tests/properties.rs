mod common;

use common::*;
use nalgebra::Vector2;
use num_complex::Complex64;
use proptest::prelude::*;
use symwh::contour::make_contour;
use symwh::gravity::{self, MonodromySpec};
use symwh::ratfun::poly_roots;
use symwh::scalarfac::scalar_canonical_factorize;
use symwh::{j_matrix, CMat2, CPoly, CRational};

fn cx() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn mat() -> impl Strategy<Value = CMat2> {
    (cx(), cx(), cx(), cx()).prop_map(|(a, b, c, d)| CMat2::new(a, b, c, d))
}

fn unit() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

/// A family and a point away from its degenerate locus.
fn family_point() -> impl Strategy<Value = (MonodromySpec, f64, f64)> {
    let eps = (0.1..3.0f64, 0.3..6.0f64, 0.3..5.0f64, any::<bool>())
        .prop_map(|(e, rho, v, neg)| (MonodromySpec::aiii_eps(c(e)), rho, if neg { -v } else { v }));
    let cs = (0.0..1.5f64, 0.3..6.0f64, 0.4..4.0f64, any::<bool>()).prop_map(|(t, rho, gap, neg)| {
        let spec = MonodromySpec::aiii_cs(c(t.cosh()), c(t.sinh())).unwrap();
        let v = rho + gap;
        (spec, rho, if neg { -v } else { v })
    });
    prop_oneof![eps, cs]
}

fn col(p: &[CRational; 2], z: Complex64) -> Vector2<Complex64> {
    Vector2::new(p[0].eval(z), p[1].eval(z))
}

fn scale(m: &CMat2) -> f64 {
    m.iter().map(|x| x.norm()).fold(1.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jaj_items(a in mat()) {
        let j = j_matrix();
        let det = a.determinant();
        let s2 = scale(&a).powi(2);
        prop_assert!((a * j * a.transpose() - j * det).norm() < 1e-12 * s2);
        let f = a.column(0).into_owned();
        let s = a.column(1).into_owned();
        prop_assert!(((s.transpose() * j * f)[0] - det).norm() < 1e-12 * s2);
        if det.norm() > 1e-3 {
            let inv = a.try_inverse().unwrap();
            let other = -(j * a.transpose() * j) / det;
            prop_assert!((inv - other).norm() < 1e-10 * scale(&inv));
        }
    }

    #[test]
    fn fjf_vanishes(f0 in cx(), f1 in cx()) {
        let f = Vector2::new(f0, f1);
        prop_assert!((f.transpose() * j_matrix() * f)[0].norm() < 1e-12);
    }

    #[test]
    fn pm_relation(r in 0.2..5.0f64, th in 0.0..std::f64::consts::TAU, t in 0.0..1.5f64) {
        let a = Complex64::from_polar(r, th);
        let (cc, ss) = (t.cosh(), t.sinh());
        let (c2, s2) = (cc * cc, ss * ss);
        let ai = a.inv();
        let plus = (c2 * ai + s2 * a) * (s2 * ai + c2 * a) - c2 * s2 * (a + ai).powi(2);
        let minus = (c2 * ai - s2 * a) * (s2 * ai - c2 * a) - c2 * s2 * (a - ai).powi(2);
        prop_assert!((plus - 1.0).norm() < 1e-10, "{plus}");
        prop_assert!((minus + 1.0).norm() < 1e-10, "{minus}");
    }

    #[test]
    fn propagation_identity((spec, rho, v) in family_point(), z in unit()) {
        let sol = gravity::factorize_point(&spec, rho, v, MARGIN);
        prop_assume!(!matches!(sol, Err(symwh::Error::DegenerateBranch { .. })));
        let sol = sol.unwrap();
        let (f, sd) = (&sol.fact, &sol.fact.symmetric);
        let j = j_matrix();
        let mz = sol.matrix.eval(z);
        let lhs = mz * (j * sd.q2(z) * col(&f.first.plus, z));
        let rhs = j * sd.q1(z) * col(&f.first.minus, z);
        let size = lhs.norm().max(rhs.norm()).max(1.0);
        prop_assert!((lhs - rhs).norm() < 1e-10 * size, "{:e}", (lhs - rhs).norm() / size);
    }

    #[test]
    fn symmetry_and_r1_consistency((spec, rho, v) in family_point(), z in unit()) {
        let sol = gravity::factorize_point(&spec, rho, v, MARGIN);
        prop_assume!(!matches!(sol, Err(symwh::Error::DegenerateBranch { .. })));
        let sol = sol.unwrap();
        let (f, sd) = (&sol.fact, &sol.fact.symmetric);
        let j = j_matrix();
        let mz = sol.matrix.eval(z);
        let sym = mz * sd.q1(z) * mz - sd.q2(z) * mz.determinant();
        prop_assert!(sym.norm() < 1e-10 * scale(&mz).powi(2));

        let (fp, fm) = (col(&f.first.plus, z), col(&f.first.minus, z));
        let det = |a: Vector2<Complex64>, b: Vector2<Complex64>| a[0] * b[1] - a[1] * b[0];
        let via_plus = f.delta.plus.eval(z) * det(fp, j * sd.q2(z) * fp);
        let via_minus = det(fm, j * sd.q1(z) * fm) / f.delta.minus.eval(z);
        let r1 = f.r1.r1.eval(z);
        let size = r1.norm().max(1.0);
        prop_assert!((via_plus - via_minus).norm() < 1e-9 * size);
        prop_assert!((via_plus - r1).norm() < 1e-9 * size);
    }

    #[test]
    fn normalisation_and_axis((spec, rho, v) in family_point()) {
        let sol = gravity::factorize_point(&spec, rho, v, MARGIN);
        prop_assume!(!matches!(sol, Err(symwh::Error::DegenerateBranch { .. })));
        let f = sol.unwrap().fact;
        let zero = c(0.0);
        if f.second.plus[0].eval(zero).norm() < 1e-10 {
            prop_assert!((f.second.plus[1].eval(zero) - 1.0).norm() < 1e-9);
        }
        let m = gravity::axis_matrix(&f).unwrap();
        let size = scale(&m);
        prop_assert!((m[(0, 1)] - m[(1, 0)]).norm() < 1e-9 * size);
        prop_assert!((m.determinant() - 1.0).norm() < 1e-9 * size * size);
    }

    #[test]
    fn delta_matches_closed_form((spec, rho, v) in family_point()) {
        let m = gravity::axis_at(&spec, rho, v, MARGIN);
        prop_assume!(!matches!(m, Err(symwh::Error::DegenerateBranch { .. })));
        let got = gravity::metric_delta(&m.unwrap()).unwrap();
        let want = spec.closed_form(rho, v).unwrap().delta;
        prop_assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn roots_recover_constructed_clusters(
        locs in proptest::collection::vec(cx(), 1..4),
        mults in proptest::collection::vec(1usize..3, 4),
    ) {
        let mut sites: Vec<Complex64> = Vec::new();
        for z in locs {
            if sites.iter().all(|s| (s - z).norm() > 0.3) {
                sites.push(z);
            }
        }
        let roots: Vec<Complex64> = sites
            .iter()
            .zip(&mults)
            .flat_map(|(&z, &m)| std::iter::repeat_n(z, m))
            .collect();
        let p = CPoly::from_roots(&roots);
        let found = poly_roots(&p, 1e-6).unwrap();
        prop_assert_eq!(found.iter().map(|c| c.multiplicity).sum::<usize>(), roots.len());
        for (z, m) in sites.iter().zip(&mults) {
            let hit = found.iter().find(|c| (c.location - z).norm() < 1e-5);
            prop_assert!(hit.is_some_and(|c| c.multiplicity == *m), "{z} x{m}: {found:?}");
        }
    }

    #[test]
    fn normalisation_cancels_common_factors(
        common in cx(),
        a in proptest::collection::vec(cx(), 2),
        b in proptest::collection::vec(cx(), 2),
        z in unit(),
    ) {
        let num = CPoly::from_roots(&[common, a[0], a[1]]);
        let den = CPoly::from_roots(&[common, b[0], b[1]]);
        prop_assume!(a.iter().chain(&b).all(|x| (x - common).norm() > 0.3));
        prop_assume!(a.iter().all(|x| b.iter().all(|y| (x - y).norm() > 0.3)));
        let r = CRational::new(num.clone(), den.clone()).unwrap();
        prop_assert_eq!(r.den().degree(), Some(2));
        prop_assert!((r.den().lead() - 1.0).norm() == 0.0);
        prop_assume!(den.eval(z).norm() > 1e-3);
        let want = num.eval(z) / den.eval(z);
        prop_assert!((r.eval(z) - want).norm() < 1e-9 * want.norm().max(1.0));
    }

    #[test]
    fn arithmetic_agrees_pointwise(
        a in proptest::collection::vec(cx(), 3),
        b in proptest::collection::vec(cx(), 3),
        z in unit(),
    ) {
        let x = CRational::new(CPoly::new(a[..2].to_vec()), CPoly::from_roots(&[a[2]])).unwrap();
        let y = CRational::new(CPoly::new(b[..2].to_vec()), CPoly::from_roots(&[b[2]])).unwrap();
        let (xv, yv) = (x.eval(z), y.eval(z));
        prop_assume!(xv.is_finite() && yv.is_finite() && yv.norm() > 1e-3);
        let size = (xv.norm() + yv.norm()).max(1.0).powi(2);
        prop_assert!(((&x + &y).eval(z) - (xv + yv)).norm() < 1e-9 * size);
        prop_assert!(((&x - &y).eval(z) - (xv - yv)).norm() < 1e-9 * size);
        prop_assert!(((&x * &y).eval(z) - xv * yv).norm() < 1e-9 * size);
        let q = x.checked_div(&y).unwrap();
        prop_assert!((q.eval(z) - xv / yv).norm() < 1e-9 * size / yv.norm());
    }

    #[test]
    fn scalar_factors_multiply_back(
        inner in proptest::collection::vec((0.0..0.8f64, 0.0..std::f64::consts::TAU), 2),
        outer in proptest::collection::vec((1.25..4.0f64, 0.0..std::f64::consts::TAU), 2),
        z in unit(),
    ) {
        let pol = |(r, t): &(f64, f64)| Complex64::from_polar(*r, *t);
        // one interior zero and pole each, one exterior zero and pole each
        let num = CPoly::from_roots(&[pol(&inner[0]), pol(&outer[0])]);
        let den = CPoly::from_roots(&[pol(&inner[1]), pol(&outer[1])]);
        prop_assume!((pol(&inner[0]) - pol(&inner[1])).norm() > 0.1);
        prop_assume!((pol(&outer[0]) - pol(&outer[1])).norm() > 0.1);
        let r = CRational::new(num, den).unwrap();
        let k = make_contour(1).unwrap();
        let s = scalar_canonical_factorize(&r, &k).unwrap();
        prop_assert_eq!(s.winding, 0);
        prop_assert!((s.plus.eval(c(0.0)) - 1.0).norm() < 1e-12);
        let want = r.eval(z);
        prop_assert!((s.minus.eval(z) * s.plus.eval(z) - want).norm() < 1e-10 * want.norm().max(1.0));
    }
}
