//! Least-squares solves with numerical rank, for the finite linear systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub const RANK_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-8;

fn max_abs(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn relative(r: &DVector<Complex64>, x: &DVector<Complex64>) -> f64 {
    max_abs(r) / (1.0 + max_abs(x))
}

#[derive(Clone, Debug)]
pub struct LstSq {
    pub x: DVector<Complex64>,
    pub rank: usize,
    pub unknowns: usize,
    /// Max row residual of the equilibrated system, relative to `1 + |x|`.
    pub residual: f64,
}

impl LstSq {
    pub fn full_rank(&self) -> bool {
        self.rank == self.unknowns
    }
}

/// Rows are scaled to unit max-norm before the SVD; rows that are zero to
/// working precision relative to the whole matrix are dropped.
pub fn lstsq(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> LstSq {
    let (m, n) = a.shape();
    let global = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut dropped_rhs = 0.0f64;
    for i in 0..m {
        let scale = a.row(i).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale <= 1e-14 * global || scale == 0.0 {
            dropped_rhs = dropped_rhs.max(b[i].norm());
            continue;
        }
        rows.push(a.row(i).map(|c| c / scale));
        rhs.push(b[i] / scale);
    }
    if rows.is_empty() || n == 0 {
        return LstSq {
            x: DVector::zeros(n),
            rank: 0,
            unknowns: n,
            residual: dropped_rhs,
        };
    }
    let ae = DMatrix::from_rows(&rows);
    let be = DVector::from_vec(rhs);
    // nalgebra's SVD can stop with a reconstruction error far above
    // round-off on these small, nearly rank-deficient systems.
    let (mr, nr) = ae.shape();
    let fm = faer::Mat::<Complex64>::from_fn(mr, nr, |i, j| ae[(i, j)]);
    let Ok(svd) = fm.thin_svd() else {
        return LstSq {
            x: DVector::zeros(n),
            rank: 0,
            unknowns: n,
            residual: f64::INFINITY,
        };
    };
    let (u, v) = (svd.U(), svd.V());
    let sv: Vec<f64> = (0..mr.min(nr)).map(|k| svd.S()[k].re).collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let eps = RANK_TOL * smax;
    let rank = sv.iter().filter(|&&s| s > eps).count();
    let mut x = DVector::zeros(nr);
    for (k, &s) in sv.iter().enumerate().filter(|(_, &s)| s > eps) {
        let coef: Complex64 = (0..mr).map(|i| u[(i, k)].conj() * be[i]).sum::<Complex64>() / s;
        for j in 0..nr {
            x[j] += v[(j, k)] * coef;
        }
    }
    let r = &ae * &x - &be;
    let residual = relative(&r, &x).max(dropped_rhs / (1.0 + max_abs(&x)));
    LstSq {
        x,
        rank,
        unknowns: n,
        residual,
    }
}
