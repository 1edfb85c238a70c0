//! The three subcommands, as functions from a config to a result.

use std::fmt::Write as _;

use rayon::prelude::*;
use symwh::gravity::{
    self, axis_at, calibrate, field_residual, metric_delta, path_increment, Calibration, MonodromySpec,
    QuadratureOptions,
};
use symwh::whsym::assemble_and_verify;
use symwh::{make_contour, Error};

use crate::config::{FamilyId, RunConfig, TableFormat};
use crate::report::FactorReport;
use crate::{error_kind, exit_code, CliError, EXIT_INVARIANT, EXIT_OK};

pub fn family_name(f: FamilyId) -> &'static str {
    match f {
        FamilyId::AiiiEps => "aiii_eps",
        FamilyId::AiiiCs => "aiii_cs",
        FamilyId::Custom => "custom",
    }
}

/// Config points, or a single point built from the overrides (a missing
/// coordinate comes from the first config point).
pub fn select_points(cfg: &RunConfig, rho: Option<f64>, v: Option<f64>) -> Result<Vec<(f64, f64)>, CliError> {
    let listed: Vec<(f64, f64)> = cfg.problem.points.iter().map(|p| (p[0], p[1])).collect();
    if rho.is_none() && v.is_none() {
        if listed.is_empty() {
            return Err(CliError::Config("no points given (problem.points or --rho/--v)".into()));
        }
        return Ok(listed);
    }
    let first = listed.first().copied();
    match (rho.or(first.map(|p| p.0)), v.or(first.map(|p| p.1))) {
        (Some(r), Some(s)) if r > 0.0 && s.is_finite() => Ok(vec![(r, s)]),
        (Some(r), Some(s)) => Err(CliError::Config(format!("point ({r}, {s}) needs rho > 0"))),
        _ => Err(CliError::Config("--rho and --v must both be given without problem.points".into())),
    }
}

pub fn factorize(cfg: &RunConfig, rho: f64, v: f64) -> Result<FactorReport, CliError> {
    let spec = cfg.problem.spec()?;
    let sol = gravity::factorize_point(&spec, rho, v, cfg.contour.margin)?;
    let contour = make_contour(spec.lambda)?;
    let rep = assemble_and_verify(&sol.matrix, &sol.fact, &contour, cfg.tolerances.verify);
    Ok(FactorReport::new(family_name(cfg.problem.family), spec.lambda, rho, v, &sol, &rep))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub rho: f64,
    pub v: f64,
    pub delta: f64,
    pub b: f64,
    pub psi: f64,
    pub field_residual: f64,
    /// `ok`, the error kind at the point, or `path:` and the error kind of
    /// the line integral that reaches it.
    pub status: String,
}

impl GridRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

fn pointwise(spec: &MonodromySpec, rho: f64, v: f64, cfg: &RunConfig) -> Result<(f64, f64), Error> {
    let margin = cfg.contour.margin;
    let delta = metric_delta(&axis_at(spec, rho, v, margin)?)?;
    let res = field_residual(spec, rho, v, cfg.tolerances.fd_step, margin)?;
    Ok((delta, res))
}

/// `(B, psi)` along one column: out from the calibration line, then up and
/// down in `v`.  A failed step leaves that row unset and the next row
/// integrates from the last point reached.
fn column(
    spec: &MonodromySpec,
    cal: &Calibration,
    rho: f64,
    vs: &[f64],
    opts: &QuadratureOptions,
) -> Vec<Result<(f64, f64), Error>> {
    let foot = match path_increment(spec, cal, &[(cal.rho, cal.v), (rho, cal.v)], opts) {
        Ok(d) => (cal.b0 + d.0, cal.psi0 + d.1),
        Err(e) => return vs.iter().map(|_| Err(e.clone())).collect(),
    };
    let mut out: Vec<Result<(f64, f64), Error>> = vec![Ok(foot); vs.len()];
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by(|&i, &j| vs[i].total_cmp(&vs[j]));
    let (below, above): (Vec<usize>, Vec<usize>) = order.into_iter().partition(|&i| vs[i] < cal.v);
    for chain in [above, below.into_iter().rev().collect()] {
        let (mut at, mut acc) = (cal.v, foot);
        for i in chain {
            match path_increment(spec, cal, &[(rho, at), (rho, vs[i])], opts) {
                Ok(d) => {
                    acc = (acc.0 + d.0, acc.1 + d.1);
                    at = vs[i];
                    out[i] = Ok(acc);
                }
                Err(e) => out[i] = Err(e),
            }
        }
    }
    out
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Rows in rho-major order, whatever order the workers finish in.
pub fn grid(cfg: &RunConfig, workers: usize) -> Result<Vec<GridRow>, CliError> {
    let g = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("grid section is required".into()))?;
    let spec = cfg.problem.spec()?;
    let opts = cfg.quadrature_options();
    let (rhos, vs) = (g.rhos(), g.vs());
    let (cr, cv) = cfg.problem.calibration_point().unwrap_or((rhos[0], vs[0]));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| {
        let cal = calibrate(&spec, cr, cv, &opts)?;
        let cells: Vec<(f64, f64)> = rhos.iter().flat_map(|&r| vs.iter().map(move |&s| (r, s))).collect();
        let point: Vec<_> = cells.par_iter().map(|&(r, s)| pointwise(&spec, r, s, cfg)).collect();
        let paths: Vec<_> = rhos.par_iter().map(|&r| column(&spec, &cal, r, &vs, &opts)).collect();
        let rows = cells
            .iter()
            .zip(point)
            .zip(paths.into_iter().flatten())
            .map(|((&(rho, v), pt), path)| {
                let nan = f64::NAN;
                let (delta, field_residual, status) = match pt {
                    Ok((d, r)) => (d, r, None),
                    Err(e) => (nan, nan, Some(error_kind(&e).to_string())),
                };
                let ((b, psi), status) = match path {
                    Ok(bp) => (bp, status),
                    Err(e) => ((nan, nan), status.or(Some(format!("path:{}", error_kind(&e))))),
                };
                GridRow {
                    rho,
                    v,
                    delta,
                    b,
                    psi,
                    field_residual,
                    status: status.unwrap_or_else(|| "ok".into()),
                }
            })
            .collect();
        Ok(rows)
    })
}

pub const GRID_HEADER: [&str; 7] = ["rho", "v", "Delta", "B", "psi", "field_residual", "status"];

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn format_table(rows: &[GridRow], format: TableFormat) -> String {
    let sep = format.separator();
    let mut out = String::new();
    out.push_str(&GRID_HEADER.join(&sep.to_string()));
    out.push('\n');
    for r in rows {
        let nums = [r.rho, r.v, r.delta, r.b, r.psi, r.field_residual].map(fmt_num);
        for n in &nums {
            write!(out, "{n}{sep}").unwrap();
        }
        out.push_str(&r.status);
        out.push('\n');
    }
    out
}

/// Exit status of a grid run: ok if any row succeeded.
pub fn grid_exit(rows: &[GridRow]) -> i32 {
    if rows.iter().any(GridRow::ok) {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Category {
    pub name: &'static str,
    pub worst: f64,
    pub bound: f64,
}

impl Category {
    pub fn pass(&self) -> bool {
        self.worst <= self.bound
    }
}

#[derive(Debug, Default)]
pub struct VerifySummary {
    pub categories: Vec<Category>,
    pub errors: Vec<((f64, f64), Error)>,
}

impl VerifySummary {
    fn record(&mut self, name: &'static str, value: f64, bound: f64) {
        // NaN counts as a failure
        let value = if value.is_nan() { f64::INFINITY } else { value };
        match self.categories.iter_mut().find(|c| c.name == name) {
            Some(c) => c.worst = c.worst.max(value),
            None => self.categories.push(Category { name, worst: value, bound }),
        }
    }

    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.categories.iter().all(Category::pass)
    }

    /// The first error's code, else 1 on a failed category, else 0.
    pub fn exit_code(&self) -> i32 {
        match self.errors.first() {
            Some((_, e)) => exit_code(e),
            None if self.pass() => EXIT_OK,
            None => EXIT_INVARIANT,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.categories {
            let tag = if c.pass() { "ok" } else { "FAIL" };
            writeln!(out, "{:<16} {:>10.3e}  (bound {:.1e})  {tag}", c.name, c.worst, c.bound).unwrap();
        }
        for ((rho, v), e) in &self.errors {
            writeln!(out, "({rho}, {v}): error[{}]: {e}", error_kind(e)).unwrap();
        }
        out
    }
}

/// Factorisation residuals, axis-matrix checks, `Delta` against the closed
/// form where there is one, and the field-equation residual.
pub fn verify(cfg: &RunConfig, points: &[(f64, f64)]) -> Result<VerifySummary, CliError> {
    let spec = cfg.problem.spec()?;
    let contour = make_contour(spec.lambda)?;
    let (tol, disc) = (cfg.tolerances.verify, cfg.tolerances.quadrature);
    let margin = cfg.contour.margin;
    let mut sum = VerifySummary::default();
    for &(rho, v) in points {
        let sol = match gravity::factorize_point(&spec, rho, v, margin) {
            Ok(s) => s,
            Err(e) => {
                sum.errors.push(((rho, v), e));
                continue;
            }
        };
        let rep = assemble_and_verify(&sol.matrix, &sol.fact, &contour, tol);
        for (name, value) in rep.entries() {
            sum.record(name, value, tol);
        }
        if !spec.uses_spectral_curve() {
            continue;
        }
        let checked = gravity::axis_matrix(&sol.fact).and_then(|m| {
            let delta = metric_delta(&m)?;
            let res = field_residual(&spec, rho, v, cfg.tolerances.fd_step, margin)?;
            Ok((m, delta, res))
        });
        match checked {
            Ok((m, delta, res)) => {
                let scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
                sum.record("axis_symmetry", (m[(0, 1)] - m[(1, 0)]).norm() / scale, tol);
                sum.record("axis_det", (m.determinant() - 1.0).norm() / (scale * scale), tol);
                if let Some(cf) = spec.closed_form(rho, v) {
                    sum.record("delta_closed", (delta - cf.delta).abs(), tol);
                }
                sum.record("field_residual", res, disc);
            }
            Err(e) => sum.errors.push(((rho, v), e)),
        }
    }
    Ok(sum)
}
