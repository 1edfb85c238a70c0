//! Field-equation residual and the line integrals for `B` and `psi`.
//!
//! With `A_i = M^-1 d_i M` the field equation reads
//! `d_rho(rho A_rho) + lambda d_v(rho A_v) = 0`; the conformal factor and
//! the twist follow from
//!
//! ```text
//! d_rho psi = (rho/4) Tr(A_rho^2 - lambda A_v^2)   d_v psi = (rho/2) Tr(A_rho A_v)
//! d_rho B = sigma rho Delta^-2 d_v chi             d_v B = -lambda sigma rho Delta^-2 d_rho chi
//! ```
//!
//! with `Delta = 1/M22`, `chi = M12/M22`.  `sigma` and the two integration
//! constants are fixed at a calibration point.

use super::{axis_at, metric_delta, twist_potential, MonodromySpec};
use crate::contour::DEFAULT_MARGIN;
use crate::error::{Error, Result};
use crate::matrix::CMat2;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Central-difference step for the integrands.
    pub fd_step: f64,
    /// Largest initial panel width.
    pub max_step: f64,
    /// Accepted change between successive panel halvings.
    pub tol: f64,
    pub max_refinements: usize,
    pub margin: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            fd_step: 1e-4,
            max_step: 0.01,
            tol: 1e-5,
            max_refinements: 4,
            margin: DEFAULT_MARGIN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricFields {
    pub delta: f64,
    pub b: f64,
    pub psi: f64,
    pub residual: f64,
}

struct Stencil {
    center: CMat2,
    rho: [CMat2; 2],
    v: [CMat2; 2],
}

fn stencil(spec: &MonodromySpec, rho: f64, v: f64, h: f64, margin: f64) -> Result<Stencil> {
    let at = |r, s| axis_at(spec, r, s, margin);
    Ok(Stencil {
        center: at(rho, v)?,
        rho: [at(rho - h, v)?, at(rho + h, v)?],
        v: [at(rho, v - h)?, at(rho, v + h)?],
    })
}

fn inverse(m: &CMat2) -> Result<CMat2> {
    m.try_inverse()
        .ok_or_else(|| Error::InvalidInput("axis matrix is singular".into()))
}

/// Frobenius norm of `d_rho(rho A_rho) + lambda d_v(rho A_v)` by central
/// differences of step `h`.
pub fn field_residual(spec: &MonodromySpec, rho: f64, v: f64, h: f64, margin: f64) -> Result<f64> {
    let s = stencil(spec, rho, v, h, margin)?;
    let minv = inverse(&s.center)?;
    let d1 = |p: &[CMat2; 2]| (p[1] - p[0]) * Complex64::new(0.5 / h, 0.0);
    let d2 = |p: &[CMat2; 2]| (p[1] - s.center * Complex64::new(2.0, 0.0) + p[0]) * Complex64::new(1.0 / (h * h), 0.0);
    let a_rho = minv * d1(&s.rho);
    let a_v = minv * d1(&s.v);
    let l = spec.lambda as f64;
    let r = Complex64::new(rho, 0.0);
    let e: CMat2 = a_rho
        + (minv * d2(&s.rho) - a_rho * a_rho) * r
        + (minv * d2(&s.v) - a_v * a_v) * (r * l);
    Ok(e.norm())
}

/// Gradients of `B` (before the sign `sigma`) and of `psi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gradients {
    pub b: [f64; 2],
    pub psi: [f64; 2],
}

pub fn gradients(spec: &MonodromySpec, rho: f64, v: f64, opts: &QuadratureOptions) -> Result<Gradients> {
    let h = opts.fd_step;
    let s = stencil(spec, rho, v, h, opts.margin)?;
    let minv = inverse(&s.center)?;
    let d1 = |p: &[CMat2; 2]| (p[1] - p[0]) * Complex64::new(0.5 / h, 0.0);
    let a_rho = minv * d1(&s.rho);
    let a_v = minv * d1(&s.v);
    let l = spec.lambda as f64;
    let psi = [
        rho / 4.0 * (a_rho * a_rho - a_v * a_v * Complex64::new(l, 0.0)).trace().re,
        rho / 2.0 * (a_rho * a_v).trace().re,
    ];
    let chi = |m: &CMat2| twist_potential(m);
    let dchi_rho = (chi(&s.rho[1])? - chi(&s.rho[0])?) / (2.0 * h);
    let dchi_v = (chi(&s.v[1])? - chi(&s.v[0])?) / (2.0 * h);
    let delta = metric_delta(&s.center)?;
    let k = rho / (delta * delta);
    Ok(Gradients {
        b: [k * dchi_v, -l * k * dchi_rho],
        psi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub rho: f64,
    pub v: f64,
    pub sigma: f64,
    pub b0: f64,
    pub psi0: f64,
}

/// Fixes `sigma` and the integration constants against the closed form at
/// `(rho, v)`.  Without a closed form `sigma = 1` and both constants vanish.
pub fn calibrate(spec: &MonodromySpec, rho: f64, v: f64, opts: &QuadratureOptions) -> Result<Calibration> {
    let Some(here) = spec.closed_form(rho, v) else {
        return Ok(Calibration {
            rho,
            v,
            sigma: 1.0,
            b0: 0.0,
            psi0: 0.0,
        });
    };
    let g = gradients(spec, rho, v, opts)?;
    let h = opts.fd_step;
    let b = |r, s| spec.closed_form(r, s).map(|c| c.b).ok_or(Error::DegenerateBranch { rho: r, v: s });
    let grad = [
        (b(rho + h, v)? - b(rho - h, v)?) / (2.0 * h),
        (b(rho, v + h)? - b(rho, v - h)?) / (2.0 * h),
    ];
    let dot = g.b[0] * grad[0] + g.b[1] * grad[1];
    Ok(Calibration {
        rho,
        v,
        sigma: if dot < 0.0 { -1.0 } else { 1.0 },
        b0: here.b,
        psi0: here.exp_psi.ln(),
    })
}

/// Integral of `(dB, dpsi)` along an axis-parallel segment: composite
/// trapezoid, halving the panels until two levels agree, with one
/// Richardson step on the final pair.
fn segment(
    spec: &MonodromySpec,
    cal: &Calibration,
    from: (f64, f64),
    to: (f64, f64),
    opts: &QuadratureOptions,
) -> Result<[f64; 2]> {
    let axis = if from.0 == to.0 {
        1
    } else if from.1 == to.1 {
        0
    } else {
        return Err(Error::InvalidInput("path segments must be axis-parallel".into()));
    };
    let (a, b) = if axis == 0 { (from.0, to.0) } else { (from.1, to.1) };
    if a == b {
        return Ok([0.0, 0.0]);
    }
    let f = |t: f64| -> Result<[f64; 2]> {
        let (r, s) = if axis == 0 { (t, from.1) } else { (from.0, t) };
        let g = gradients(spec, r, s, opts)?;
        Ok([cal.sigma * g.b[axis], g.psi[axis]])
    };
    let mut n = ((b - a).abs() / opts.max_step).ceil().max(1.0) as usize;
    let mut h = (b - a) / n as f64;
    let (fa, fb) = (f(a)?, f(b)?);
    let mut sum = [0.5 * (fa[0] + fb[0]), 0.5 * (fa[1] + fb[1])];
    for i in 1..n {
        let y = f(a + i as f64 * h)?;
        sum[0] += y[0];
        sum[1] += y[1];
    }
    let mut t = [sum[0] * h, sum[1] * h];
    for _ in 0..opts.max_refinements {
        for i in 0..n {
            let y = f(a + (i as f64 + 0.5) * h)?;
            sum[0] += y[0];
            sum[1] += y[1];
        }
        n *= 2;
        h /= 2.0;
        let t2 = [sum[0] * h, sum[1] * h];
        let change = (t2[0] - t[0]).abs().max((t2[1] - t[1]).abs());
        if change <= opts.tol {
            return Ok([t2[0] + (t2[0] - t[0]) / 3.0, t2[1] + (t2[1] - t[1]) / 3.0]);
        }
        t = t2;
    }
    Err(Error::PathTooCoarse)
}

/// `(B, psi)` at the end of a path of axis-parallel segments that starts at
/// the calibration point.
pub fn integrate_path(
    spec: &MonodromySpec,
    cal: &Calibration,
    path: &[(f64, f64)],
    opts: &QuadratureOptions,
) -> Result<(f64, f64)> {
    match path.first() {
        Some(&(r, s)) if r == cal.rho && s == cal.v => {}
        _ => return Err(Error::InvalidInput("path must start at the calibration point".into())),
    }
    let d = path_increment(spec, cal, path, opts)?;
    Ok((cal.b0 + d.0, cal.psi0 + d.1))
}

/// Change of `(B, psi)` along a path of axis-parallel segments from anywhere.
pub fn path_increment(
    spec: &MonodromySpec,
    cal: &Calibration,
    path: &[(f64, f64)],
    opts: &QuadratureOptions,
) -> Result<(f64, f64)> {
    let (mut b, mut psi) = (0.0, 0.0);
    for w in path.windows(2) {
        let d = segment(spec, cal, w[0], w[1], opts)?;
        b += d[0];
        psi += d[1];
    }
    Ok((b, psi))
}

pub fn twist_b(spec: &MonodromySpec, cal: &Calibration, path: &[(f64, f64)], opts: &QuadratureOptions) -> Result<f64> {
    integrate_path(spec, cal, path, opts).map(|r| r.0)
}

pub fn conformal_psi(
    spec: &MonodromySpec,
    cal: &Calibration,
    path: &[(f64, f64)],
    opts: &QuadratureOptions,
) -> Result<f64> {
    integrate_path(spec, cal, path, opts).map(|r| r.1)
}

/// `(B, psi)` at `(rho, v)` for every `v` in `vs`: along `v = cal.v` to
/// `rho`, then up and down the column.  Results follow the order of `vs`.
pub fn integrate_column(
    spec: &MonodromySpec,
    cal: &Calibration,
    rho: f64,
    vs: &[f64],
    opts: &QuadratureOptions,
) -> Result<Vec<(f64, f64)>> {
    let foot = integrate_path(spec, cal, &[(cal.rho, cal.v), (rho, cal.v)], opts)?;
    let mut out = vec![(0.0, 0.0); vs.len()];
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by(|&i, &j| vs[i].total_cmp(&vs[j]));
    let (below, above): (Vec<usize>, Vec<usize>) = order.into_iter().partition(|&i| vs[i] < cal.v);
    for chain in [above, below.into_iter().rev().collect::<Vec<_>>()] {
        let (mut at, mut acc) = (cal.v, foot);
        for i in chain {
            let d = segment(spec, cal, (rho, at), (rho, vs[i]), opts)?;
            acc = (acc.0 + d[0], acc.1 + d[1]);
            at = vs[i];
            out[i] = acc;
        }
    }
    Ok(out)
}
