//! First columns of a canonical factorisation: `M f+ = f-` on the contour.
//!
//! With `det M = 1` the plus side is `f+ = adj(M) f-`.  The minus side is
//! written as `f- = (N1, N2) / pi+`, where `pi+` collects the interior poles
//! of `M` and `deg N <= deg pi+`.  Analyticity of the first plus component
//! inside the contour becomes the condition that the interior part of its
//! denominator divides its numerator: a set of linear rows in the
//! coefficients of `N1`, `N2`.  Two more rows fix `f+(0)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::contour::{Contour, Region};
use crate::error::{Error, Result};
use crate::linsolve::{lstsq, RESIDUAL_TOL};
use crate::matrix::RationalMatrix2;
use crate::ratfun::{CPoly, CRational, RootCluster};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Locations closer than this (relative) are the same root.
const SAME_ROOT: f64 = 1e-8;
/// A polynomial vanishes at a point when it is this small relative to its
/// evaluation scale there.
const VANISH_TOL: f64 = 1e-9;
/// Components whose contour samples stay below this fraction of the column
/// scale are identically zero.
const CHOP_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ColumnPair {
    pub plus: [CRational; 2],
    pub minus: [CRational; 2],
}

/// What to do when the column-2 polynomials share an interior zero, so
/// that analyticity of the second plus component is not implied by the first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrecondPolicy {
    /// Impose analyticity of both components.
    #[default]
    ImposeBoth,
    /// Report `PrecondViolation`.
    Strict,
}

pub(crate) fn same_root(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= SAME_ROOT * a.norm().max(b.norm()).max(1.0)
}

pub(crate) fn vanishes_at(p: &CPoly, z: Complex64) -> bool {
    p.is_zero() || p.eval(z).norm() <= VANISH_TOL * p.eval_scale(z)
}

/// Union of cluster lists: multiplicities at a shared location combine with `f`.
fn merge(lists: &[&[RootCluster]], f: fn(usize, usize) -> usize) -> Vec<RootCluster> {
    let mut out: Vec<RootCluster> = Vec::new();
    for list in lists {
        for cl in list.iter() {
            match out.iter_mut().find(|o| same_root(o.location, cl.location)) {
                Some(o) => o.multiplicity = f(o.multiplicity, cl.multiplicity),
                None => out.push(*cl),
            }
        }
    }
    out
}

pub(crate) fn from_clusters(clusters: &[RootCluster]) -> CPoly {
    let roots: Vec<Complex64> = clusters
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.location, c.multiplicity))
        .collect();
    CPoly::from_roots(&roots)
}

fn checked_poles(r: &CRational, c: &Contour) -> Result<Vec<RootCluster>> {
    let poles = r.poles()?;
    if let Some(p) = poles.iter().find(|p| c.classify(p.location) == Region::OnContour) {
        return Err(Error::ZeroOnContour {
            location: p.location,
        });
    }
    Ok(poles)
}

fn interior_poles(m: &RationalMatrix2, c: &Contour) -> Result<Vec<RootCluster>> {
    let mut lists = Vec::new();
    for row in &m.entries {
        for e in row {
            let inner: Vec<RootCluster> = checked_poles(e, c)?
                .into_iter()
                .filter(|p| c.classify(p.location) == Region::Interior)
                .collect();
            lists.push(inner);
        }
    }
    let refs: Vec<&[RootCluster]> = lists.iter().map(|l| l.as_slice()).collect();
    Ok(merge(&refs, usize::max))
}

/// Monic polynomial whose roots are the interior poles of the entries, each
/// with its largest multiplicity over the entries.
pub fn dplus_pole_polynomial(m: &RationalMatrix2, c: &Contour) -> Result<CPoly> {
    Ok(from_clusters(&interior_poles(m, c)?))
}

/// `phi = (u[0] N1 + u[1] N2) / (g_int g_ext)` with no root of `g_int`
/// common to both `u`.
struct RowForm {
    u: [CPoly; 2],
    g_int: CPoly,
    g_ext: CPoly,
    interior: Vec<RootCluster>,
}

/// Row form of `phi = qa T1 + qb T2` with `T = N / pi+`.
fn row_form(qa: &CRational, qb: &CRational, pi: &[RootCluster], c: &Contour) -> Result<RowForm> {
    let (pa, pb) = (checked_poles(qa, c)?, checked_poles(qb, c)?);
    let lcm = merge(&[&pa, &pb], usize::max);
    let l = from_clusters(&lcm);
    let lift = |q: &CRational| &q.num().clone() * &l.div_rem(q.den()).0;
    let mut u = [lift(qa), lift(qb)];

    let mut g = merge(&[&lcm, pi], |a, b| a + b);
    for cl in g.iter_mut() {
        if c.classify(cl.location) != Region::Interior {
            continue;
        }
        while cl.multiplicity > 0 && u.iter().all(|p| vanishes_at(p, cl.location)) {
            for p in u.iter_mut() {
                if !p.is_zero() {
                    *p = p.deflate(cl.location).0;
                }
            }
            cl.multiplicity -= 1;
        }
    }
    let (inner, outer): (Vec<RootCluster>, Vec<RootCluster>) = g
        .into_iter()
        .filter(|cl| cl.multiplicity > 0)
        .partition(|cl| c.classify(cl.location) == Region::Interior);
    Ok(RowForm {
        u,
        g_int: from_clusters(&inner),
        g_ext: from_clusters(&outer),
        interior: inner,
    })
}

impl RowForm {
    /// Dividend for unknown `j` of `2 * nb.len()`: `u[j / w] nb[j % w]`.
    fn basis(&self, j: usize, nb: &[CPoly]) -> CPoly {
        &self.u[j / nb.len()] * &nb[j % nb.len()]
    }

    /// Divisibility by `g_int` as vanishing Taylor coefficients of the
    /// numerator at each interior root, up to its multiplicity.
    fn remainder_rows(&self, nb: &[CPoly]) -> Vec<Vec<Complex64>> {
        let mut rows = Vec::new();
        for cl in &self.interior {
            let shifted: Vec<CPoly> = (0..2 * nb.len())
                .map(|j| self.basis(j, nb).shift(cl.location))
                .collect();
            for t in 0..cl.multiplicity {
                rows.push(shifted.iter().map(|p| p.coeff(t)).collect());
            }
        }
        rows
    }

    /// Row giving `phi(0)` once divisibility holds.
    fn value_at_zero_row(&self, nb: &[CPoly]) -> Vec<Complex64> {
        let e0 = self.g_ext.eval(ZERO);
        (0..2 * nb.len())
            .map(|j| self.basis(j, nb).div_rem(&self.g_int).0.coeff(0) / e0)
            .collect()
    }

    fn numerator(&self, n: &[CPoly; 2]) -> CPoly {
        &(&self.u[0] * &n[0]) + &(&self.u[1] * &n[1])
    }

    /// The plus component, after checking divisibility.
    fn component(&self, n: &[CPoly; 2]) -> Result<CRational> {
        let p = self.numerator(n);
        let (quot, rem) = p.div_rem(&self.g_int);
        let scale = (self.u[0].norm_inf().max(self.u[1].norm_inf())
            * n[0].norm_inf().max(n[1].norm_inf()))
        .max(f64::MIN_POSITIVE);
        if rem.norm_inf() > 1e-8 * scale {
            return Err(Error::NonCanonical(format!(
                "plus component keeps an interior pole (remainder {:.3e})",
                rem.norm_inf() / scale
            )));
        }
        CRational::new(quot, self.g_ext.clone())
    }
}

/// Interior zero shared by the column-2 polynomials of `M`.
fn column2_common_zero(m: &RationalMatrix2, c: &Contour) -> Result<Option<Complex64>> {
    let cleared = |row: usize| -> Result<CPoly> {
        let (x, y) = (m.entry(row, 0), m.entry(row, 1));
        let lcm = merge(&[&checked_poles(x, c)?, &checked_poles(y, c)?], usize::max);
        Ok(&y.num().clone() * &from_clusters(&lcm).div_rem(y.den()).0)
    };
    let (p12, p22) = (cleared(0)?, cleared(1)?);
    let (probe, other) = if p12.is_zero() { (&p22, &p12) } else { (&p12, &p22) };
    if probe.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    for z in CRational::from_poly(probe.clone()).zeros()? {
        if c.classify(z.location) == Region::Interior && vanishes_at(other, z.location) {
            return Ok(Some(z.location));
        }
    }
    Ok(None)
}

struct System {
    rows: Vec<Vec<Complex64>>,
    rhs: Vec<Complex64>,
}

struct Setup {
    pi: CPoly,
    pi_clusters: Vec<RootCluster>,
    forms: [RowForm; 2],
    impose_second: bool,
}

fn setup(m: &RationalMatrix2, c: &Contour, policy: PrecondPolicy) -> Result<Setup> {
    let det_defect = m.unit_det_defect();
    if det_defect > 1e-9 {
        return Err(Error::DeterminantNotUnit { defect: det_defect });
    }
    let pi_clusters = interior_poles(m, c)?;
    let e = &m.entries;
    // adj(M) = [[q22, -q12], [-q21, q11]]
    let forms = [
        row_form(&e[1][1], &-&e[0][1], &pi_clusters, c)?,
        row_form(&-&e[1][0], &e[0][0], &pi_clusters, c)?,
    ];
    let impose_second = match column2_common_zero(m, c)? {
        None => false,
        Some(z) if policy == PrecondPolicy::Strict => {
            return Err(Error::PrecondViolation(format!(
                "column-2 polynomials share the interior zero {z}"
            )))
        }
        Some(_) => true,
    };
    Ok(Setup {
        pi: from_clusters(&pi_clusters),
        pi_clusters: pi_clusters.clone(),
        forms,
        impose_second,
    })
}

/// Numerators of the partial-fraction basis of `N / pi+`:
/// `pi+ / (tau - p)^k` for every interior pole `p` and `1 <= k <= m_p`,
/// preceded by `pi+` itself (the constant term) when `with_constant`.
fn pole_basis(pi: &[RootCluster], with_constant: bool) -> Vec<CPoly> {
    let mut out = Vec::new();
    if with_constant {
        out.push(from_clusters(pi));
    }
    for (i, cl) in pi.iter().enumerate() {
        for k in 1..=cl.multiplicity {
            let mut rest = pi.to_vec();
            rest[i].multiplicity -= k;
            out.push(from_clusters(&rest));
        }
    }
    out
}

impl Setup {
    fn divisibility(&self, nb: &[CPoly]) -> System {
        let mut rows = self.forms[0].remainder_rows(nb);
        if self.impose_second {
            rows.extend(self.forms[1].remainder_rows(nb));
        }
        let rhs = vec![ZERO; rows.len()];
        System { rows, rhs }
    }
}

fn solve_system(sys: &System, unknowns: usize) -> Result<DVector<Complex64>> {
    let a = DMatrix::from_fn(sys.rows.len(), unknowns, |i, j| sys.rows[i][j]);
    let b = DVector::from_vec(sys.rhs.clone());
    let sol = lstsq(&a, &b);
    if !sol.full_rank() {
        return Err(Error::NonCanonical(format!(
            "homogeneous problem has a {}-dimensional kernel",
            sol.unknowns - sol.rank
        )));
    }
    if sol.residual > RESIDUAL_TOL {
        return Err(Error::NonCanonical(format!(
            "column system is inconsistent (residual {:.3e})",
            sol.residual
        )));
    }
    Ok(sol.x)
}

/// Sets components to exact zero when they vanish on the contour.
pub(crate) fn chop(pair: [CRational; 2], c: &Contour) -> [CRational; 2] {
    let pts = crate::contour::sample(c, 64).unwrap();
    let peak = |r: &CRational| pts.iter().map(|&z| r.eval(z).norm()).fold(0.0, f64::max);
    let (p0, p1) = (peak(&pair[0]), peak(&pair[1]));
    let scale = p0.max(p1);
    let [a, b] = pair;
    [
        if p0 <= CHOP_TOL * scale { CRational::zero() } else { a },
        if p1 <= CHOP_TOL * scale { CRational::zero() } else { b },
    ]
}

pub fn solve_columns(m: &RationalMatrix2, c: &Contour, norm: [Complex64; 2]) -> Result<ColumnPair> {
    solve_columns_with(m, c, norm, PrecondPolicy::default())
}

pub fn solve_columns_with(
    m: &RationalMatrix2,
    c: &Contour,
    norm: [Complex64; 2],
    policy: PrecondPolicy,
) -> Result<ColumnPair> {
    let s = setup(m, c, policy)?;
    let nb = pole_basis(&s.pi_clusters, true);
    let width = nb.len();
    let mut sys = s.divisibility(&nb);
    for (form, value) in s.forms.iter().zip(norm) {
        sys.rows.push(form.value_at_zero_row(&nb));
        sys.rhs.push(value);
    }
    let x = solve_system(&sys, 2 * width)?;

    let combine = |xs: &[Complex64]| {
        xs.iter()
            .zip(&nb)
            .fold(CPoly::zero(), |acc, (&a, b)| &acc + &b.scale(a))
    };
    let n = [combine(&x.as_slice()[..width]), combine(&x.as_slice()[width..])];
    let plus = [s.forms[0].component(&n)?, s.forms[1].component(&n)?];
    let minus = [
        CRational::new(n[0].clone(), s.pi.clone())?,
        CRational::new(n[1].clone(), s.pi.clone())?,
    ];
    let pair = ColumnPair {
        plus: chop(plus, c),
        minus: chop(minus, c),
    };
    certify(&pair, c)?;
    Ok(pair)
}

/// Plus components have no interior poles; minus components no exterior
/// poles and are bounded at infinity.
pub fn certify(pair: &ColumnPair, c: &Contour) -> Result<()> {
    for r in &pair.plus {
        for p in r.poles()? {
            if c.classify(p.location) != Region::Exterior {
                return Err(Error::ResidualPole {
                    location: p.location,
                });
            }
        }
    }
    for r in &pair.minus {
        for p in r.poles()? {
            if c.classify(p.location) != Region::Interior {
                return Err(Error::ResidualPole {
                    location: p.location,
                });
            }
        }
        if !r.is_bounded_at_infinity() {
            return Err(Error::UnboundedAtInfinity);
        }
    }
    Ok(())
}

/// Dimension of the space of solutions with `f-` vanishing at infinity and
/// no normalisation.
pub fn kernel_dimension(m: &RationalMatrix2, c: &Contour) -> Result<usize> {
    let s = setup(m, c, PrecondPolicy::ImposeBoth)?;
    let nb = pole_basis(&s.pi_clusters, false);
    let width = nb.len();
    if width == 0 {
        return Ok(0);
    }
    let mut sys = s.divisibility(&nb);
    // Both components must be analytic in the homogeneous problem.
    if !s.impose_second {
        sys.rows.extend(s.forms[1].remainder_rows(&nb));
    }
    if sys.rows.is_empty() {
        return Ok(2 * width);
    }
    let a = DMatrix::from_fn(sys.rows.len(), 2 * width, |i, j| sys.rows[i][j]);
    let sol = lstsq(&a, &DVector::zeros(sys.rows.len()));
    Ok(sol.unknowns - sol.rank)
}

/// `(1, 0)`
pub const FIRST_NORM: [Complex64; 2] = [ONE, ZERO];
/// `(0, 1)`
pub const SECOND_NORM: [Complex64; 2] = [ZERO, ONE];
