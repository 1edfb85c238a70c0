//! Run configuration, read from TOML with strict key checking.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use symwh::gravity::{CustomEntries, MonodromySpec, QuadratureOptions, Variable};
use symwh::{CPoly, CRational};

use crate::CliError;

/// `[re, im]`
pub type Pair = [f64; 2];

pub fn to_complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn to_pair(c: Complex64) -> Pair {
    [c.re, c.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Problem,
    #[serde(default)]
    pub contour: ContourConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    /// Worker cap for grid rows; available parallelism when absent.
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    AiiiEps,
    AiiiCs,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub family: FamilyId,
    /// Fixed by the family for `aiii_eps` (+1) and `aiii_cs` (-1).
    #[serde(default)]
    pub lambda: Option<i32>,
    #[serde(default)]
    pub params: Params,
    /// Points for `factorize` (first one) and `verify` (all).
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    /// Start of the `B` and `psi` line integrals.
    #[serde(default)]
    pub calibration: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default)]
    pub eps: Option<Pair>,
    #[serde(default)]
    pub c: Option<Pair>,
    #[serde(default)]
    pub s: Option<Pair>,
    #[serde(default)]
    pub entries: Option<EntriesConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableId {
    Omega,
    Tau,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntriesConfig {
    pub variable: VariableId,
    pub a: RationalCoeffs,
    pub b: RationalCoeffs,
    /// Defaults to `b`.
    #[serde(default)]
    pub c: Option<RationalCoeffs>,
    pub d: RationalCoeffs,
}

/// Ascending coefficients of numerator and denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalCoeffs {
    pub num: Vec<Pair>,
    #[serde(default = "one_coeffs")]
    pub den: Vec<Pair>,
}

fn one_coeffs() -> Vec<Pair> {
    vec![[1.0, 0.0]]
}

fn poly(cs: &[Pair]) -> CPoly {
    CPoly::new(cs.iter().map(|&p| to_complex(p)).collect())
}

impl RationalCoeffs {
    pub fn from_rational(r: &CRational) -> Self {
        RationalCoeffs {
            num: r.num().coeffs().iter().map(|&c| to_pair(c)).collect(),
            den: r.den().coeffs().iter().map(|&c| to_pair(c)).collect(),
        }
    }

    /// No cancellation, so written coefficients come back as they were.
    pub fn to_rational(&self) -> Result<CRational, CliError> {
        CRational::from_coeffs(poly(&self.num), poly(&self.den))
            .map_err(|e| CliError::Config(format!("bad rational entry: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourConfig {
    /// Minimum distance of the branch points from the unit circle.
    pub margin: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            margin: symwh::contour::DEFAULT_MARGIN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_n: usize,
    pub v_min: f64,
    pub v_max: f64,
    pub v_n: usize,
}

fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![min];
    }
    (0..n)
        .map(|i| if i == n - 1 { max } else { min + (max - min) * i as f64 / (n - 1) as f64 })
        .collect()
}

impl GridConfig {
    pub fn rhos(&self) -> Vec<f64> {
        axis(self.rho_min, self.rho_max, self.rho_n)
    }

    pub fn vs(&self) -> Vec<f64> {
        axis(self.v_min, self.v_max, self.v_n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on the algebraic residuals of a factorisation.
    pub verify: f64,
    /// Panel-halving tolerance of the line integrals; also the bound on
    /// discretised quantities checked by `verify`.
    pub quadrature: f64,
    /// Central-difference step.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            verify: 1e-9,
            quadrature: 1e-5,
            fd_step: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

impl TableFormat {
    pub fn separator(self) -> char {
        match self {
            TableFormat::Csv => ',',
            TableFormat::Tsv => '\t',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Where `factorize` writes its TOML report; stdout when absent.
    #[serde(default)]
    pub report: Option<PathBuf>,
    /// Where `grid` writes its table; stdout when absent.
    #[serde(default)]
    pub table: Option<PathBuf>,
    #[serde(default)]
    pub table_format: TableFormat,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let t = &self.tolerances;
        for (name, x) in [("verify", t.verify), ("quadrature", t.quadrature), ("fd_step", t.fd_step)] {
            if !(x > 0.0 && x.is_finite()) {
                return bad(format!("tolerances.{name} must be positive, got {x}"));
            }
        }
        if !(self.contour.margin > 0.0 && self.contour.margin < 1.0) {
            return bad(format!("contour.margin must lie in (0, 1), got {}", self.contour.margin));
        }
        if let Some(g) = &self.grid {
            if g.rho_n == 0 || g.v_n == 0 {
                return bad("grid sizes must be at least 1".into());
            }
            if !(g.rho_min > 0.0) || g.rho_max < g.rho_min || g.v_max < g.v_min {
                return bad("grid bounds need 0 < rho_min <= rho_max and v_min <= v_max".into());
            }
            if ![g.rho_min, g.rho_max, g.v_min, g.v_max].iter().all(|x| x.is_finite()) {
                return bad("grid bounds must be finite".into());
            }
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        for p in self.problem.points.iter().chain(self.problem.calibration.iter()) {
            if !(p[0] > 0.0) || !p[1].is_finite() {
                return bad(format!("point ({}, {}) needs rho > 0", p[0], p[1]));
            }
        }
        self.problem.spec().map(|_| ())
    }

    pub fn quadrature_options(&self) -> QuadratureOptions {
        QuadratureOptions {
            fd_step: self.tolerances.fd_step,
            tol: self.tolerances.quadrature,
            margin: self.contour.margin,
            ..QuadratureOptions::default()
        }
    }
}

impl Problem {
    pub fn spec(&self) -> Result<MonodromySpec, CliError> {
        let p = &self.params;
        let fixed = |want: i32| match self.lambda {
            Some(l) if l != want => Err(CliError::Config(format!(
                "lambda = {l} does not match the family (needs {want})"
            ))),
            _ => Ok(()),
        };
        let only = |allowed: &[&str]| {
            let given = [
                ("eps", p.eps.is_some()),
                ("c", p.c.is_some()),
                ("s", p.s.is_some()),
                ("entries", p.entries.is_some()),
            ];
            match given.iter().find(|(k, set)| *set && !allowed.contains(k)) {
                Some((k, _)) => Err(CliError::Config(format!("params.{k} does not apply to this family"))),
                None => Ok(()),
            }
        };
        let need = |x: Option<Pair>, name: &str| {
            x.map(to_complex)
                .ok_or_else(|| CliError::Config(format!("params.{name} is required")))
        };
        match self.family {
            FamilyId::AiiiEps => {
                fixed(1)?;
                only(&["eps"])?;
                Ok(MonodromySpec::aiii_eps(need(p.eps, "eps")?))
            }
            FamilyId::AiiiCs => {
                fixed(-1)?;
                only(&["c", "s"])?;
                MonodromySpec::aiii_cs(need(p.c, "c")?, need(p.s, "s")?)
                    .map_err(|e| CliError::Config(e.to_string()))
            }
            FamilyId::Custom => {
                only(&["entries"])?;
                let e = p
                    .entries
                    .as_ref()
                    .ok_or_else(|| CliError::Config("params.entries is required".into()))?;
                let lambda = self
                    .lambda
                    .ok_or_else(|| CliError::Config("lambda is required for custom".into()))?;
                let b = e.b.to_rational()?;
                let entries = CustomEntries {
                    a: e.a.to_rational()?,
                    c: match &e.c {
                        Some(c) => c.to_rational()?,
                        None => b.clone(),
                    },
                    b,
                    d: e.d.to_rational()?,
                    variable: match e.variable {
                        VariableId::Omega => Variable::Omega,
                        VariableId::Tau => Variable::Tau,
                    },
                };
                MonodromySpec::custom(entries, lambda).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }

    /// Calibration point: explicit, else the first listed point.
    pub fn calibration_point(&self) -> Option<(f64, f64)> {
        self.calibration.or(self.points.first().copied()).map(|p| (p[0], p[1]))
    }
}
