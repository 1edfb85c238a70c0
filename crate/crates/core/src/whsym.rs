//! Second columns of the factorisation of a symmetric matrix from its first
//! columns, and the assembled factorisation with its verifier.
//!
//! With `q = a/d = p1/p2`, `r1 = delta+ (q f1+^2 - f2+^2) = p~1/p2` and an
//! unknown `r2 = R2/p2`,
//!
//! ```text
//! s1+ = (R2 f1+ + p2 f2+) / p~1     s2+ = (R2 f2+ + p1 f1+) / p~1
//! s1- = (R2 f1- + p1 f2-) / p~1     s2- = (R2 f2- + p2 f1-) / p~1
//! ```
//!
//! `R2` is fixed by requiring the plus numerators to vanish at the interior
//! zeros of `p~1`, the minus numerators at the exterior zeros and at
//! infinity (where `r1` vanishes to order `deg p2 - deg p~1`), and
//! `s1+(0) = 0`.  At each zero only one of the two numerators is needed:
//! `f1+ h - f2+ g = p~1 / delta+` (and its minus analogue) carries the
//! condition over to the other one wherever the chosen `f` component is
//! nonzero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::contour::{sample, Contour, Region};
use crate::error::{Error, Result};
use crate::linsolve::{lstsq, RESIDUAL_TOL};
use crate::matrix::{j_matrix, sampled_defect, CMat2, RationalMatrix2};
use crate::ratfun::{CPoly, CRational, RootCluster};
use crate::rhfirst::{self, certify, ColumnPair, FIRST_NORM};
use crate::scalarfac::{scalar_canonical_factorize, ScalarFactorization};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size below which a column component counts as zero at a point.
pub const ZERO_COMPONENT_TOL: f64 = 1e-9;
/// Zeros of `p~1` this close to the origin are taken to sit at the origin.
const ORIGIN_TOL: f64 = 1e-8;
/// Largest supported order of a zero of `r1`.
pub const MAX_ZERO_ORDER: usize = 2;
pub const VERIFY_SAMPLES: usize = 256;
const UNIT_DET_TOL: f64 = 1e-12;
/// Double zeros of `p~1` come out of the root finder split by about
/// `sqrt(eps)`; pairs this close (relative) are taken as one.
const R1_CLUSTER_TOL: f64 = 1e-6;
/// Relative remainder allowed when dividing a numerator by `p~1`.
const DIVISION_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SymmetricData {
    pub q: CRational,
    pub p1: CPoly,
    pub p2: CPoly,
}

impl SymmetricData {
    /// `Q1 = diag(1, -q)`
    pub fn q1(&self, z: Complex64) -> CMat2 {
        CMat2::new(ONE, ZERO, ZERO, -self.q.eval(z))
    }

    /// `Q2 = diag(q, -1)`
    pub fn q2(&self, z: Complex64) -> CMat2 {
        CMat2::new(self.q.eval(z), ZERO, ZERO, -ONE)
    }
}

pub fn check_symmetric(m: &RationalMatrix2) -> Result<()> {
    let residual = sampled_defect(m.entry(0, 1), m.entry(1, 0));
    if residual > 1e-10 {
        return Err(Error::NotSymmetric { residual });
    }
    Ok(())
}

/// `q = a/d = p1/p2` with `p1` monic.
pub fn diag_quotient(m: &RationalMatrix2) -> Result<SymmetricData> {
    check_symmetric(m)?;
    let (a, d) = (m.entry(0, 0), m.entry(1, 1));
    if a.is_zero() || d.is_zero() {
        return Err(Error::InvalidInput("diagonal entry vanishes identically".into()));
    }
    let q = a.checked_div(d)?;
    if !q.is_bounded_at_infinity() {
        return Err(Error::QuotientUnboundedAtInfinity);
    }
    for p in q.poles()? {
        if (p.location.norm() - 1.0).abs() <= crate::contour::DEFAULT_BAND {
            return Err(Error::PoleOnContour {
                location: p.location,
            });
        }
    }
    let lead = q.num().lead();
    Ok(SymmetricData {
        p1: q.num().scale(lead.inv()),
        p2: q.den().scale(lead.inv()),
        q,
    })
}

#[derive(Clone, Debug)]
pub struct R1 {
    pub r1: CRational,
    /// `r1 = p~1 / p2`
    pub ptilde1: CPoly,
    /// Order of the zero of `r1` at infinity, `deg p2 - deg p~1`.
    pub order_at_infinity: usize,
}

impl R1 {
    pub fn from_ptilde1(ptilde1: CPoly, p2: &CPoly) -> Result<Self> {
        let (dn, dd) = (ptilde1.degree(), p2.degree().unwrap_or(0));
        let dn = dn.ok_or_else(|| Error::NonCanonical("r1 vanishes identically".into()))?;
        if dn > dd {
            return Err(Error::NonCanonical("r1 is unbounded at infinity".into()));
        }
        Ok(R1 {
            r1: CRational::new(ptilde1.clone(), p2.clone())?,
            ptilde1,
            order_at_infinity: dd - dn,
        })
    }
}

/// Extra samples beyond the degree bound, used to confirm `r1 p2` is a
/// polynomial.
const R1_GUARD: usize = 8;

/// `r1 = delta+ (q f1+^2 - f2+^2)`, brought over the denominator `p2`.
/// `p~1 = delta+ (p1 f1+^2 - p2 f2+^2)` is interpolated from its values at
/// roots of unity, where every factor is evaluated directly.
pub fn compute_r1(sd: &SymmetricData, delta_plus: &CRational, fplus: &[CRational; 2]) -> Result<R1> {
    let deg = |r: &CRational| r.num().degree().unwrap_or(0) as isize - r.den().degree().unwrap_or(0) as isize;
    let pdeg = |p: &CPoly| p.degree().unwrap_or(0) as isize;
    let bound = (deg(delta_plus)
        + (pdeg(&sd.p1) + 2 * deg(&fplus[0])).max(pdeg(&sd.p2) + 2 * deg(&fplus[1])))
    .max(0) as usize;
    let n = bound + 1 + R1_GUARD;
    let values: Vec<Complex64> = (0..n)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            let (f1, f2) = (fplus[0].eval(z), fplus[1].eval(z));
            delta_plus.eval(z) * (sd.p1.eval(z) * f1 * f1 - sd.p2.eval(z) * f2 * f2)
        })
        .collect();
    let coeffs = CPoly::interpolate_roots_of_unity(&values);
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tail = coeffs[bound + 1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if tail > 1e-8 * big {
        return Err(Error::NonCanonical(
            "poles of r1 are not poles of q".into(),
        ));
    }
    // r1 is bounded at infinity, so terms above deg p2 are round-off.
    let top = bound.min(pdeg(&sd.p2).max(0) as usize);
    let excess = coeffs[top + 1..=bound].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if excess > 1e-8 * big {
        return Err(Error::NonCanonical("r1 is unbounded at infinity".into()));
    }
    let mut head = coeffs[..=top].to_vec();
    for c in head.iter_mut() {
        if c.norm() <= 1e-14 * big {
            *c = ZERO;
        }
    }
    R1::from_ptilde1(CPoly::new(head), &sd.p2)
}

#[derive(Clone, Debug, Default)]
pub struct R1Zeros {
    pub interior: Vec<RootCluster>,
    pub exterior: Vec<RootCluster>,
    pub at_infinity: usize,
}

pub fn classify_r1_zeros(r1: &R1, c: &Contour) -> Result<R1Zeros> {
    let mut out = R1Zeros {
        at_infinity: r1.order_at_infinity,
        ..Default::default()
    };
    if r1.ptilde1.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    for cl in crate::ratfun::poly_roots(&r1.ptilde1, R1_CLUSTER_TOL)? {
        if cl.multiplicity > MAX_ZERO_ORDER {
            return Err(Error::UnsupportedMultiplicity {
                location: cl.location,
                multiplicity: cl.multiplicity,
            });
        }
        match c.classify(cl.location) {
            Region::Interior => out.interior.push(cl),
            Region::Exterior => out.exterior.push(cl),
            Region::OnContour => {
                return Err(Error::ZeroOnContour {
                    location: cl.location,
                })
            }
        }
    }
    Ok(out)
}

/// Which numerator a block of rows annihilates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Numerator {
    /// `R2 f1+ + p2 f2+` (interior) or `R2 f1- + p1 f2-` (exterior, infinity)
    G,
    /// `R2 f2+ + p1 f1+` (interior) or `R2 f2- + p2 f1-` (exterior, infinity)
    H,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Condition {
    Interior { at: Complex64, order: usize, numerator: Numerator },
    Exterior { at: Complex64, order: usize, numerator: Numerator },
    Infinity { order: usize, numerator: Numerator },
    /// `s1+(0) = 0`: Taylor coefficient `order` of the interior `G` at 0.
    Normalization { order: usize },
}

#[derive(Clone, Debug)]
pub struct R2System {
    pub a: DMatrix<Complex64>,
    pub b: DVector<Complex64>,
    /// The imposed conditions; near zeros share their rows.
    pub conditions: Vec<Condition>,
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn convolve(a: &[Complex64], b: &[Complex64], t: usize) -> Complex64 {
    (0..=t)
        .map(|i| a.get(i).copied().unwrap_or(ZERO) * b.get(t - i).copied().unwrap_or(ZERO))
        .sum()
}

/// Rows forcing `R2 F + P H` to vanish to `order` at a finite point `z`.
fn point_rows(
    z: Complex64,
    order: usize,
    n: usize,
    f: &CRational,
    p: &CPoly,
    h: &CRational,
) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let fs = f.series_at(z, order);
    let hs = h.series_at(z, order);
    let ps = p.shift(z);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for t in 0..order {
        let row = (0..=n)
            .map(|j| {
                (0..=t.min(j))
                    .map(|i| binom(j, i) * z.powu((j - i) as u32) * fs[t - i])
                    .sum()
            })
            .collect();
        rows.push(row);
        rhs.push(-convolve(ps.coeffs(), &hs, t));
    }
    (rows, rhs)
}

/// Rows forcing `w^n (R2 F + P H)(1/w)` to vanish to `order` at `w = 0`.
fn infinity_rows(
    order: usize,
    n: usize,
    f: &CRational,
    p: &CPoly,
    h: &CRational,
) -> Result<(Vec<Vec<Complex64>>, Vec<Complex64>)> {
    let fs = f.series_at_infinity(order)?;
    let hs = h.series_at_infinity(order)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for t in 0..order {
        // w^n tau^j = w^(n - j)
        let row = (0..=n)
            .map(|j| if t + j >= n { fs[t + j - n] } else { ZERO })
            .collect();
        let constant: Complex64 = (0..=n)
            .filter(|&i| t + i >= n)
            .map(|i| p.coeff(i) * hs[t + i - n])
            .sum();
        rows.push(row);
        rhs.push(-constant);
    }
    Ok((rows, rhs))
}

fn is_small(x: Complex64, y: Complex64) -> bool {
    x.norm() <= ZERO_COMPONENT_TOL * (x.norm() + y.norm())
}

/// A zero of one numerator, to the given order.
struct Node {
    at: Complex64,
    order: usize,
    interior: bool,
    numerator: Numerator,
}

/// Zeros closer than this (relative to `max(1, |z|)`) are imposed jointly.
const NEAR_TOL: f64 = 1e-2;
const GROUP_SAMPLES: usize = 64;

/// Rows `(1/2 pi i) \oint (R2 F + P H)(t) ((t - c)/r)^l / W(t) dt = 0`,
/// `l < deg W`, on the circle `|t - c| = r`; `W` has the group's zeros.  The
/// rows span the same conditions as the Taylor rows at each zero but stay
/// well conditioned as the zeros merge.
fn group_rows(
    group: &[&Node],
    radius: f64,
    n: usize,
    f: &CRational,
    p: &CPoly,
    h: &CRational,
) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let k: usize = group.iter().map(|g| g.order).sum();
    let centre = group.iter().map(|g| g.at * g.order as f64).sum::<Complex64>() / k as f64;
    let mut rows = vec![vec![ZERO; n + 1]; k];
    let mut rhs = vec![ZERO; k];
    for s in 0..GROUP_SAMPLES {
        let u = Complex64::from_polar(1.0, std::f64::consts::TAU * s as f64 / GROUP_SAMPLES as f64);
        let t = centre + u * radius;
        let w = group
            .iter()
            .fold(ONE, |acc, g| acc * ((t - g.at) / radius).powu(g.order as u32));
        let (fv, hv) = (f.eval(t), p.eval(t) * h.eval(t));
        let mut weight = u / (w * GROUP_SAMPLES as f64);
        for l in 0..k {
            let mut tj = ONE;
            for x in rows[l].iter_mut() {
                *x += weight * tj * fv;
                tj *= t;
            }
            rhs[l] -= weight * hv;
            weight *= u;
        }
    }
    (rows, rhs)
}

/// Splits nodes sharing region and numerator into chains of near zeros.
fn near_groups(nodes: &[Node]) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..nodes.len()).collect();
    for i in 0..nodes.len() {
        for j in 0..i {
            let (a, b) = (&nodes[i], &nodes[j]);
            let close = (a.at - b.at).norm() <= NEAR_TOL * a.at.norm().max(1.0);
            if close && a.interior == b.interior && a.numerator == b.numerator {
                let (li, lj) = (label[i], label[j]);
                for x in label.iter_mut() {
                    if *x == li {
                        *x = lj;
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..nodes.len() {
        match groups.iter_mut().find(|g| label[g[0]] == label[i]) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

pub fn assemble_r2_system(sd: &SymmetricData, zeros: &R1Zeros, cols: &ColumnPair) -> Result<R2System> {
    let n = sd.p2.degree().unwrap_or(0);
    let [f1p, f2p] = &cols.plus;
    let [f1m, f2m] = &cols.minus;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut conditions = Vec::new();
    let mut nodes = Vec::new();

    // Interior: g = R2 f1+ + p2 f2+, h = R2 f2+ + p1 f1+.
    let mut origin = None;
    for cl in &zeros.interior {
        let z = cl.location;
        let numerator = if is_small(f1p.eval(z), f2p.eval(z)) { Numerator::H } else { Numerator::G };
        conditions.push(Condition::Interior { at: z, order: cl.multiplicity, numerator });
        if z.norm() <= ORIGIN_TOL {
            origin = Some((nodes.len(), numerator, cl.multiplicity));
        }
        nodes.push(Node { at: z, order: cl.multiplicity, interior: true, numerator });
    }

    // Exterior: g = R2 f1- + p1 f2-, h = R2 f2- + p2 f1-.
    for cl in &zeros.exterior {
        let z = cl.location;
        let numerator = if is_small(f1m.eval(z), f2m.eval(z)) { Numerator::H } else { Numerator::G };
        conditions.push(Condition::Exterior { at: z, order: cl.multiplicity, numerator });
        nodes.push(Node { at: z, order: cl.multiplicity, interior: false, numerator });
    }

    // s1+(0) = 0 once the zero of p~1 at the origin (if any) is divided out.
    let origin_order = origin.map_or(0, |(_, _, m)| m);
    match origin {
        Some((i, Numerator::G, _)) => {
            nodes[i].at = ZERO;
            nodes[i].order += 1;
        }
        Some((_, Numerator::H, m)) => {
            let (r, b) = point_rows(ZERO, m + 1, n, f1p, &sd.p2, f2p);
            rows.push(r[m].clone());
            rhs.push(b[m]);
        }
        None => nodes.push(Node { at: ZERO, order: 1, interior: true, numerator: Numerator::G }),
    }

    for group in near_groups(&nodes) {
        let first = &nodes[group[0]];
        let (f, p, h) = match (first.interior, first.numerator) {
            (true, Numerator::G) => (f1p, &sd.p2, f2p),
            (true, Numerator::H) => (f2p, &sd.p1, f1p),
            (false, Numerator::G) => (f1m, &sd.p1, f2m),
            (false, Numerator::H) => (f2m, &sd.p2, f1m),
        };
        let members: Vec<&Node> = group.iter().map(|&i| &nodes[i]).collect();
        let k: usize = members.iter().map(|g| g.order).sum();
        let centre = members.iter().map(|g| g.at * g.order as f64).sum::<Complex64>() / k as f64;
        let spread = members.iter().map(|g| (g.at - centre).norm()).fold(0.0, f64::max);
        // f and h are analytic on the side of the contour the group lies on.
        let radius = 0.5 * (1.0 - centre.norm()).abs();
        if members.len() > 1 && 4.0 * spread < radius {
            let (r, b) = group_rows(&members, radius, n, f, p, h);
            rows.extend(r);
            rhs.extend(b);
        } else {
            for g in members {
                let (r, b) = point_rows(g.at, g.order, n, f, p, h);
                rows.extend(r);
                rhs.extend(b);
            }
        }
    }

    if zeros.at_infinity > 0 {
        let (a1, a2) = (
            f1m.eval_infinity().finite().unwrap_or(ZERO),
            f2m.eval_infinity().finite().unwrap_or(ZERO),
        );
        let numerator = if is_small(a1, a2) { Numerator::H } else { Numerator::G };
        let (r, b) = match numerator {
            Numerator::G => infinity_rows(zeros.at_infinity, n, f1m, &sd.p1, f2m)?,
            Numerator::H => infinity_rows(zeros.at_infinity, n, f2m, &sd.p2, f1m)?,
        };
        rows.extend(r);
        rhs.extend(b);
        conditions.push(Condition::Infinity { order: zeros.at_infinity, numerator });
    }
    conditions.push(Condition::Normalization { order: origin_order });

    Ok(R2System {
        a: DMatrix::from_fn(rows.len(), n + 1, |i, j| rows[i][j]),
        b: DVector::from_vec(rhs),
        conditions,
    })
}

/// Solves for the numerator `R2` of `r2 = R2 / p2`.
pub fn solve_r2(sys: &R2System, sd: &SymmetricData) -> Result<(CPoly, CRational)> {
    let sol = lstsq(&sys.a, &sys.b);
    if !sol.full_rank() {
        return Err(Error::R2SystemSingular(format!(
            "rank {} of {}",
            sol.rank, sol.unknowns
        )));
    }
    if sol.residual > RESIDUAL_TOL {
        return Err(Error::R2SystemSingular(format!(
            "inconsistent (residual {:.3e})",
            sol.residual
        )));
    }
    // Coefficients at round-off level relative to the largest are zero.
    let big = sol.x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let coeffs: Vec<Complex64> = sol
        .x
        .iter()
        .map(|&c| if c.norm() <= 1e-13 * big { ZERO } else { c })
        .collect();
    let r2_num = CPoly::new(coeffs);
    let r2 = CRational::new(r2_num.clone(), sd.p2.clone())?;
    Ok((r2_num, r2))
}

fn zero_list(clusters: &[RootCluster]) -> Vec<Complex64> {
    clusters
        .iter()
        .flat_map(|cl| {
            let z = if cl.location.norm() <= ORIGIN_TOL { ZERO } else { cl.location };
            std::iter::repeat_n(z, cl.multiplicity)
        })
        .collect()
}

/// `a f + b g` over the product of denominators, with nothing cancelled: a
/// tiny residue can be a real pole, and a dropped remainder here is
/// amplified by the division by near zeros of `p~1`.
fn combine(a: &CPoly, f: &CRational, b: &CPoly, g: &CRational) -> (CPoly, CPoly) {
    if f.den() == g.den() {
        return (&(a * f.num()) + &(b * g.num()), f.den().clone());
    }
    (
        &(&(a * f.num()) * g.den()) + &(&(b * g.num()) * f.den()),
        f.den() * g.den(),
    )
}

/// `num / (lead * den * divisor * rest)`, with `divisor` required to divide
/// `num`.
fn divide_out((num, den): (CPoly, CPoly), divisor: &[Complex64], rest: &CPoly, lead: Complex64) -> Result<CRational> {
    let (quot, mismatch) = num.divide_by_roots(divisor);
    if mismatch > DIVISION_TOL {
        let location = divisor
            .iter()
            .copied()
            .max_by(|a, b| num.eval(*a).norm().total_cmp(&num.eval(*b).norm()))
            .unwrap_or(ZERO);
        return Err(Error::ResidualPole { location });
    }
    CRational::new(quot.scale(lead.inv()), &den * rest)
}

pub fn build_second_columns(
    sd: &SymmetricData,
    r1: &R1,
    zeros: &R1Zeros,
    r2_num: &CPoly,
    cols: &ColumnPair,
    c: &Contour,
) -> Result<ColumnPair> {
    let (r2, p1, p2) = (r2_num, &sd.p1, &sd.p2);
    let lead = r1.ptilde1.lead();
    let (inner, outer) = (zero_list(&zeros.interior), zero_list(&zeros.exterior));
    let (inner_poly, outer_poly) = (CPoly::from_roots(&inner), CPoly::from_roots(&outer));
    let [f1p, f2p] = &cols.plus;
    let [f1m, f2m] = &cols.minus;
    // Plus numerators vanish at the interior zeros of p~1, minus numerators
    // at the exterior ones; what is left of p~1 stays in the denominator.
    let plus_over = |x| divide_out(x, &inner, &outer_poly, lead);
    let minus_over = |x| divide_out(x, &outer, &inner_poly, lead);
    let plus = [
        plus_over(combine(r2, f1p, p2, f2p))?,
        plus_over(combine(r2, f2p, p1, f1p))?,
    ];
    let minus = [
        minus_over(combine(r2, f1m, p1, f2m))?,
        minus_over(combine(r2, f2m, p2, f1m))?,
    ];
    let pair = ColumnPair {
        plus: rhfirst::chop(plus, c),
        minus: rhfirst::chop(minus, c),
    };
    certify(&pair, c).map_err(|e| match e {
        Error::UnboundedAtInfinity => Error::ResidualPole {
            location: Complex64::new(f64::INFINITY, 0.0),
        },
        e => e,
    })?;
    Ok(pair)
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub first: ColumnPair,
    pub second: ColumnPair,
    pub r1: R1,
    pub r2: CRational,
    /// `R2`, the numerator of `r2` over `p2`.
    pub r2_numerator: CPoly,
    pub symmetric: SymmetricData,
    pub delta: ScalarFactorization,
    pub xinv: RationalMatrix2,
    pub mminus: RationalMatrix2,
    pub conditions: Vec<Condition>,
}

/// The full pipeline: first columns, `r1`, the `R2` system, second columns.
pub fn factorize(m: &RationalMatrix2, c: &Contour) -> Result<Factorization> {
    check_symmetric(m)?;
    // A determinant within round-off of 1 is taken as exactly 1.
    let det = if m.unit_det_defect() <= UNIT_DET_TOL { CRational::one() } else { m.det() };
    let delta = scalar_canonical_factorize(&det, c)?;
    // Existence is settled before the preconditions on `a/d`.
    let first = rhfirst::solve_columns(m, c, FIRST_NORM)?;
    let sd = diag_quotient(m)?;
    let r1 = compute_r1(&sd, &delta.plus, &first.plus)?;
    let zeros = classify_r1_zeros(&r1, c)?;
    let sys = assemble_r2_system(&sd, &zeros, &first)?;
    let (r2_numerator, r2) = solve_r2(&sys, &sd)?;
    let second = build_second_columns(&sd, &r1, &zeros, &r2_numerator, &first, c)?;
    let xinv = RationalMatrix2::from_columns(&first.plus, &second.plus);
    let mminus = RationalMatrix2::from_columns(&first.minus, &second.minus);
    Ok(Factorization {
        first,
        second,
        r1,
        r2,
        r2_numerator,
        symmetric: sd,
        delta,
        xinv,
        mminus,
        conditions: sys.conditions,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// `max |M X^-1 - M-|` over the contour samples
    pub boundary: f64,
    /// `|X^-1(0) - I|`
    pub x_at_zero: f64,
    /// `max |delta+ det[f+ s+] - 1|`
    pub determinant: f64,
    /// `max |M Q1 M - delta Q2|`
    pub symmetry: f64,
    /// `max |M (J Q2 f+) - J Q1 f-|`
    pub propagation: f64,
    /// `max |r2 - delta+ s+^T Q2 f+|`
    pub r2_plus: f64,
    /// `max |r2 - delta-^-1 s-^T Q1 f-|`
    pub r2_minus: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("boundary", self.boundary),
            ("x_at_zero", self.x_at_zero),
            ("determinant", self.determinant),
            ("symmetry", self.symmetry),
            ("propagation", self.propagation),
            ("r2_plus", self.r2_plus),
            ("r2_minus", self.r2_minus),
        ]
    }

    pub fn worst(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

fn max_abs(m: &CMat2) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

pub fn assemble_and_verify(
    m: &RationalMatrix2,
    fact: &Factorization,
    c: &Contour,
    tol: f64,
) -> VerificationReport {
    let sd = &fact.symmetric;
    let j = j_matrix();
    let col = |pair: &[CRational; 2], z| nalgebra::Vector2::new(pair[0].eval(z), pair[1].eval(z));
    let mut rep = VerificationReport {
        boundary: 0.0,
        x_at_zero: max_abs(&(fact.xinv.eval(ZERO) - CMat2::identity())),
        determinant: 0.0,
        symmetry: 0.0,
        propagation: 0.0,
        r2_plus: 0.0,
        r2_minus: 0.0,
        tol,
        pass: false,
    };
    let mut points = sample(c, VERIFY_SAMPLES).unwrap();
    points.push(ZERO);
    for &z in &points {
        let on_contour = z != ZERO;
        let xinv = fact.xinv.eval(z);
        let dplus = fact.delta.plus.eval(z);
        let det = (dplus * xinv.determinant() - ONE).norm();
        rep.determinant = rep.determinant.max(det);

        let (fp, sp) = (col(&fact.first.plus, z), col(&fact.second.plus, z));
        let r2 = fact.r2.eval(z);
        let r2p = dplus * (sp.transpose() * sd.q2(z) * fp)[0];
        rep.r2_plus = rep.r2_plus.max(rel((r2 - r2p).norm(), r2.norm()));
        if !on_contour {
            continue;
        }
        let mz = m.eval(z);
        let mminus = fact.mminus.eval(z);
        rep.boundary = rep.boundary.max(rel(max_abs(&(mz * xinv - mminus)), max_abs(&mminus)));

        let delta = mz.determinant();
        let sym = mz * sd.q1(z) * mz - sd.q2(z) * delta;
        rep.symmetry = rep.symmetry.max(rel(max_abs(&sym), max_abs(&mz).powi(2)));

        let (fm, sm) = (col(&fact.first.minus, z), col(&fact.second.minus, z));
        let lhs = mz * (j * sd.q2(z) * fp);
        let rhs = j * sd.q1(z) * fm;
        let scale = lhs.iter().chain(rhs.iter()).map(|c| c.norm()).fold(0.0, f64::max);
        rep.propagation = rep.propagation.max(rel((lhs - rhs).norm(), scale));

        let r2m = (sm.transpose() * sd.q1(z) * fm)[0] / fact.delta.minus.eval(z);
        rep.r2_minus = rep.r2_minus.max(rel((r2 - r2m).norm(), r2.norm()));
    }
    rep.pass = rep.entries().iter().all(|(_, v)| *v <= tol && v.is_finite());
    rep
}
