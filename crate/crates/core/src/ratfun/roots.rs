//! Simultaneous root finding (Aberth-Ehrlich) with multiplicity clustering.
//!
//! Multiple roots come out of any floating-point root finder as a small
//! star of simple roots, of radius about `eps^(1/m)` for multiplicity `m`.
//! Roots closer than the caller's tolerance are merged unconditionally.
//! Looser groups (up to `LOOSE_RADIUS`) are merged only when the polynomial
//! is at rounding level at the group centroid, which holds for a genuine
//! multiple root and fails for distinct nearby roots.  Each cluster centre is
//! then polished by Newton's method on the `(m-1)`-th derivative, where the
//! root is simple.

use num_complex::Complex64;

use super::poly::CPoly;
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

/// Groups up to this relative diameter are candidates for a multiple root.
const LOOSE_RADIUS: f64 = 1e-3;
/// Absolute floor on the merge radius.
const ABS_FLOOR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// All roots of `p`, clustered.  `cluster_tol` is relative to the largest
/// root magnitude, floored at `1e-10` absolute.
pub fn poly_roots(p: &CPoly, cluster_tol: f64) -> Result<Vec<RootCluster>> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidInput("root finding needs degree >= 1".into())),
    };

    // Exact zeros at the origin come straight off the bottom coefficients.
    let low = p.coeffs().iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    let reduced = CPoly::new(p.coeffs()[low..].to_vec());
    let mut clusters = Vec::new();
    if low > 0 {
        clusters.push(RootCluster {
            location: Complex64::new(0.0, 0.0),
            multiplicity: low,
        });
    }
    if degree == low {
        return Ok(clusters);
    }

    let roots = aberth(&reduced)?;
    let found = cluster(&reduced, &roots, cluster_tol);
    if low > 0 {
        // Noise in the low coefficients leaves further origin zeros just off 0.
        let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tight = (cluster_tol * scale).max(ABS_FLOOR);
        for cl in found {
            if cl.location.norm() <= tight {
                clusters[0].multiplicity += cl.multiplicity;
            } else {
                clusters.push(cl);
            }
        }
    } else {
        clusters = found;
    }
    debug_assert_eq!(clusters.iter().map(|c| c.multiplicity).sum::<usize>(), degree);
    Ok(clusters)
}

fn aberth(p: &CPoly) -> Result<Vec<Complex64>> {
    let n = p.degree().unwrap();
    let monic = p.monic();
    if n == 1 {
        return Ok(vec![-monic.coeff(0)]);
    }
    let dp = monic.derivative();
    let a = monic.coeffs();

    // Radius from the coefficient bound max_k |a_{n-k}|^(1/k); the roots lie
    // within twice this value.
    let radius = (1..=n)
        .map(|k| a[n - k].norm().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let eps = f64::EPSILON;
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let zi = z[i];
            let pv = monic.eval(zi);
            if pv.norm() <= 4.0 * eps * monic.eval_scale(zi) {
                converged[i] = true;
                continue;
            }
            let ratio = pv / dp.eval(zi);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (zi - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::NonConvergence {
                    iterations: MAX_ITERATIONS,
                });
            }
            z[i] = zi - step;
            if step.norm() <= 2.0 * eps * z[i].norm().max(radius * eps) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }

    // Roots of a multiple cluster stall at the pseudozero level rather than
    // converging; accept anything with a small backward error.
    let slack = 1e3 * n as f64 * eps;
    for &zi in &z {
        if !zi.re.is_finite()
            || !zi.im.is_finite()
            || monic.eval(zi).norm() > slack * monic.eval_scale(zi)
        {
            return Err(Error::NonConvergence {
                iterations: MAX_ITERATIONS,
            });
        }
    }
    Ok(z)
}

fn cluster(p: &CPoly, roots: &[Complex64], cluster_tol: f64) -> Vec<RootCluster> {
    let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tight = (cluster_tol * scale).max(ABS_FLOOR);
    let loose = (LOOSE_RADIUS * scale.max(1.0)).max(tight);

    let tight_groups = link(roots, tight);
    let loose_groups = link(roots, loose);

    let mut out = Vec::new();
    for group in loose_groups {
        if group.len() > 1 && is_multiple_root(p, roots, &group) {
            out.push(make_cluster(p, roots, &group));
        } else {
            for tg in tight_groups.iter().filter(|g| group.contains(&g[0])) {
                out.push(make_cluster(p, roots, tg));
            }
        }
    }
    out
}

/// Single-linkage grouping of root indices within `radius`.
fn link(roots: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[label[r]].push(i);
    }
    groups
}

fn centroid(roots: &[Complex64], group: &[usize]) -> Complex64 {
    group.iter().map(|&i| roots[i]).sum::<Complex64>() / group.len() as f64
}

fn is_multiple_root(p: &CPoly, roots: &[Complex64], group: &[usize]) -> bool {
    let c = centroid(roots, group);
    let n = p.degree().unwrap_or(0).max(1) as f64;
    // Every derivative below the multiplicity must vanish at the centre, to
    // the precision that order of derivative can carry.
    // Coefficient noise sets the floor, so measure at radius >= 1.
    let at = Complex64::new(c.norm().max(1.0), 0.0);
    let m = group.len();
    let mut d = p.clone();
    for k in 0..m {
        let tol = 1e4 * n * f64::EPSILON.powf((m - k) as f64 / m as f64);
        if d.eval(c).norm() > tol * d.eval_scale(at) {
            return false;
        }
        d = d.derivative();
    }
    true
}

fn make_cluster(p: &CPoly, roots: &[Complex64], group: &[usize]) -> RootCluster {
    let m = group.len();
    let start = centroid(roots, group);
    let spread = group
        .iter()
        .map(|&i| (roots[i] - start).norm())
        .fold(0.0, f64::max);
    RootCluster {
        location: polish(p, start, m, spread),
        multiplicity: m,
    }
}

/// Newton on `p^(m-1)`, where a root of multiplicity `m` is simple.
fn polish(p: &CPoly, start: Complex64, m: usize, spread: f64) -> Complex64 {
    let mut g = p.clone();
    for _ in 1..m {
        g = g.derivative();
    }
    let dg = g.derivative();
    // Iterates of a multiple root may stall together, so allow moves up to
    // the size of the perturbation a root of multiplicity m can carry.
    let limit = 10.0 * spread + 10.0 * f64::EPSILON.powf(1.0 / m as f64) * start.norm().max(1.0);
    let mut z = start;
    let mut best = (g.eval(z).norm(), z);
    for _ in 0..8 {
        let d = dg.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - g.eval(z) / d;
        if !next.re.is_finite() || !next.im.is_finite() || (next - start).norm() > limit {
            break;
        }
        z = next;
        let r = g.eval(z).norm();
        if r < best.0 {
            best = (r, z);
        }
        if r == 0.0 {
            break;
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::DEFAULT_CLUSTER_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<RootCluster>) -> Vec<RootCluster> {
        v.sort_by(|a, b| {
            (a.location.re, a.location.im)
                .partial_cmp(&(b.location.re, b.location.im))
                .unwrap()
        });
        v
    }

    #[test]
    fn simple_roots() {
        let r = sorted(poly_roots(&CPoly::from_real(&[-1.0, 0.0, 1.0]), DEFAULT_CLUSTER_TOL).unwrap());
        assert_eq!(r.len(), 2);
        assert!((r[0].location - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1].location - c(1.0, 0.0)).norm() < 1e-14);
        assert!(r.iter().all(|c| c.multiplicity == 1));
    }

    #[test]
    fn two_double_roots() {
        let p = CPoly::from_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
        let r = sorted(poly_roots(&p, DEFAULT_CLUSTER_TOL).unwrap());
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].multiplicity, 2);
        assert_eq!(r[1].multiplicity, 2);
        assert!(r[0].location.norm() < 1e-14);
        assert!((r[1].location - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn noisy_double_root_at_origin() {
        // Round-off coefficients below tau^2 split the double root at 0.
        let mut p = CPoly::from_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)])
            .scale(c(0.25, 0.0))
            .coeffs()
            .to_vec();
        p[0] = c(3e-17, 1e-17);
        p[1] = c(-2e-17, 0.0);
        let r = sorted(poly_roots(&CPoly::new(p), DEFAULT_CLUSTER_TOL).unwrap());
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].multiplicity, 2);
        assert!(r[0].location.norm() < 1e-12);
    }

    #[test]
    fn triple_root() {
        let z = c(1.0, 1.0);
        let r = poly_roots(&CPoly::from_roots(&[z, z, z]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!((r[0].location - z).norm() < 1e-10);
    }

    #[test]
    fn close_but_distinct_roots_stay_apart() {
        let p = CPoly::from_roots(&[c(0.5, 0.0), c(0.5 + 1e-4, 0.0), c(-3.0, 1.0)]);
        let r = poly_roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn constant_is_rejected() {
        assert!(poly_roots(&CPoly::one(), DEFAULT_CLUSTER_TOL).is_err());
    }
}
