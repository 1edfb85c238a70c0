#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use symwh::contour::{make_contour, sample};
use symwh::gravity::{self, MonodromySpec, PointSolution, SpectralPoint};
use symwh::{CMat2, CRational, RationalMatrix2};

pub const MARGIN: f64 = 0.05;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn eps_spec() -> MonodromySpec {
    MonodromySpec::aiii_eps(c(1.0))
}

pub fn cs_spec() -> MonodromySpec {
    MonodromySpec::aiii_cs(c(2f64.sqrt()), c(1.0)).unwrap()
}

pub fn solve(spec: &MonodromySpec, rho: f64, v: f64) -> PointSolution {
    gravity::factorize_point(spec, rho, v, MARGIN).unwrap_or_else(|e| panic!("({rho}, {v}): {e}"))
}

/// `m-(z)` and `m+(z)` from the branch points, evaluated directly.
pub fn m_pair(sp: &SpectralPoint, z: Complex64) -> (Complex64, Complex64) {
    let plus = c(1.0) - z / sp.tau0tilde;
    let minus = sp.tau0tilde * (sp.lambda as f64 * sp.rho / 2.0) * (z - sp.tau0) / z;
    (minus, plus)
}

/// Columns `[f+, s+, f-, s-]` at `z` from the closed forms.
pub type Columns = [[Complex64; 2]; 4];

pub fn eps_closed(eps: f64, sp: &SpectralPoint, z: Complex64) -> Columns {
    let (mm, mp) = m_pair(sp, z);
    let e = c(eps);
    [
        [mp, c(0.0)],
        [e * (mp - mp.inv()), mp.inv()],
        [mm.inv(), e * mm.inv()],
        [e * mm.inv(), mm + e * e * mm.inv()],
    ]
}

pub fn cs_closed(cc: f64, s: f64, sp: &SpectralPoint, z: Complex64) -> Columns {
    let (mm, mp) = m_pair(sp, z);
    let (c2, s2, sc) = (c(cc * cc), c(s * s), c(s * cc));
    [
        [c2 * mp - s2 * mp.inv(), sc * (mp.inv() - mp)],
        [sc * (mp - mp.inv()), c2 * mp.inv() - s2 * mp],
        [c2 * mm.inv() + s2 * mm, sc * (mm.inv() + mm)],
        [sc * (mm.inv() + mm), s2 * mm.inv() + c2 * mm],
    ]
}

pub fn computed(sol: &PointSolution, z: Complex64) -> Columns {
    let f = &sol.fact;
    let ev = |p: &[CRational; 2]| [p[0].eval(z), p[1].eval(z)];
    [
        ev(&f.first.plus),
        ev(&f.second.plus),
        ev(&f.first.minus),
        ev(&f.second.minus),
    ]
}

pub fn max_column_error(a: &Columns, b: &Columns) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn contour_points(n: usize) -> Vec<Complex64> {
    sample(&make_contour(1).unwrap(), n).unwrap()
}

/// Fourier-Galerkin solution of `M phi+ = phi-`, `phi+(0) = (1, 0)` on the
/// unit circle: `phi+` in `tau^0..tau^n`, `phi-` in `tau^0..tau^-n`, modes
/// `-n..n` of the boundary equation matched exactly.
pub struct Galerkin {
    pub plus: [Vec<Complex64>; 2],
    pub minus: [Vec<Complex64>; 2],
}

impl Galerkin {
    pub fn solve(m: &RationalMatrix2, n: usize) -> Galerkin {
        let k = 8 * n;
        let pts: Vec<Complex64> = (0..k)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64))
            .collect();
        let vals: Vec<CMat2> = pts.iter().map(|&z| m.eval(z)).collect();
        // coefficient of tau^d in entry (r, s), d in -2n..=2n
        let hat = |r: usize, s: usize, d: i64| -> Complex64 {
            let mut acc = c(0.0);
            for (z, mz) in pts.iter().zip(&vals) {
                acc += mz[(r, s)] * z.powi(-d as i32);
            }
            acc / k as f64
        };
        let span = 2 * n as i64;
        let mut table = vec![[[c(0.0); 2]; 2]; (2 * span + 1) as usize];
        for d in -span..=span {
            for r in 0..2 {
                for s in 0..2 {
                    table[(d + span) as usize][r][s] = hat(r, s, d);
                }
            }
        }
        // unknowns: a[i][1..=n] then b[i][0..=n], for i = 0, 1
        let na = n;
        let nb = n + 1;
        let idx_a = |i: usize, kk: usize| i * na + (kk - 1);
        let idx_b = |i: usize, kk: usize| 2 * na + i * nb + kk;
        let unknowns = 2 * na + 2 * nb;
        let rows = 2 * (2 * n + 1);
        let mut a = DMatrix::<Complex64>::zeros(rows, unknowns);
        let mut rhs = DVector::<Complex64>::zeros(rows);
        for (jj, mode) in (-(n as i64)..=n as i64).enumerate() {
            for r in 0..2 {
                let row = 2 * jj + r;
                // sum_kk M_{mode-kk} a_kk; a_0 = (1, 0) goes to the right side
                rhs[row] = -table[(mode + span) as usize][r][0];
                for s in 0..2 {
                    for kk in 1..=n {
                        a[(row, idx_a(s, kk))] += table[(mode - kk as i64 + span) as usize][r][s];
                    }
                }
                if mode <= 0 {
                    a[(row, idx_b(r, (-mode) as usize))] -= c(1.0);
                }
            }
        }
        let x = a.lu().solve(&rhs).expect("Galerkin system is nonsingular");
        let mut plus = [vec![c(1.0)], vec![c(0.0)]];
        let mut minus = [Vec::new(), Vec::new()];
        for i in 0..2 {
            plus[i].extend((1..=n).map(|kk| x[idx_a(i, kk)]));
            minus[i].extend((0..=n).map(|kk| x[idx_b(i, kk)]));
        }
        Galerkin { plus, minus }
    }

    pub fn eval(&self, z: Complex64) -> ([Complex64; 2], [Complex64; 2]) {
        let series = |cs: &[Complex64], w: Complex64| cs.iter().rev().fold(c(0.0), |acc, &x| acc * w + x);
        (
            [series(&self.plus[0], z), series(&self.plus[1], z)],
            [series(&self.minus[0], z.inv()), series(&self.minus[1], z.inv())],
        )
    }
}
