//! Registry of closed-form identities, each checked by evaluating two or
//! more independent sides over a parameter grid.

mod grid;
mod registry;
mod report;

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classes::ClassError;
use crate::measures::MeasureError;
use crate::numerics::QuadError;
use crate::specfun::SpecError;

pub use grid::{Axis, AxisValues, GridOverride, Point, Subgrid, Value};
pub use registry::registry;
pub use report::{write_csv, write_json, CSV_HEADER};

/// Environment variable capping the number of worker threads (0 = sequential).
pub const THREADS_ENV: &str = "THORINKIT_THREADS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("{id}: the parameter grid is empty")]
    EmptyGrid { id: String },
    #[error("{id}: {axis} = {value} lies outside the domain of the identity")]
    OutOfDomain { id: String, axis: String, value: String },
    #[error("{id}: no parameter named `{axis}`")]
    UnknownAxis { id: String, axis: String },
    #[error("{id}: cannot use `{value}` for parameter `{axis}`")]
    BadValue { id: String, axis: String, value: String },
    #[error("malformed grid override `{0}` (expected name=v1,v2,...)")]
    BadOverride(String),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("invalid {THREADS_ENV} value `{0}`")]
    BadThreads(String),
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

/// Failure of one side at one grid point.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct EvalError(pub String);

impl EvalError {
    pub fn new(msg: impl Into<String>) -> Self {
        EvalError(msg.into())
    }
}

macro_rules! eval_error_from {
    ($($t:ty),*) => {$(
        impl From<$t> for EvalError {
            fn from(e: $t) -> Self {
                EvalError(e.to_string())
            }
        }
    )*};
}
eval_error_from!(ClassError, MeasureError, SpecError, QuadError);

pub type EvalResult = Result<f64, EvalError>;

/// One way of computing the quantity an identity asserts equal.
#[derive(Clone)]
pub struct Side {
    pub name: &'static str,
    /// Higher-level routines this side relies on. Sides of one identity must
    /// not share tags; the numerics module is not tagged.
    pub paths: &'static [&'static str],
    pub eval: fn(&Point) -> EvalResult,
}

impl fmt::Debug for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Side").field("name", &self.name).field("paths", &self.paths).finish()
    }
}

/// How the first side relates to the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Relative gap to every other side within tolerance.
    Equal,
    /// First side must not exceed the second by more than the tolerance.
    AtMost,
    /// First side must be strictly larger than the second.
    Exceeds,
}

#[derive(Debug, Clone)]
pub struct IdentityCase {
    pub id: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    pub grid: Vec<Subgrid>,
    /// Validity domain; default grids are filtered by it.
    pub domain: fn(&Point) -> bool,
    pub sides: Vec<Side>,
    pub rel_tol: f64,
    pub comparison: Comparison,
}

impl IdentityCase {
    /// Grid points after applying an optional override.
    pub fn points(&self, grid: Option<&GridOverride>) -> Result<Vec<Point>, VerifyError> {
        grid::expand(self, grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Failed { side: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    #[serde(flatten)]
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideInfo {
    pub name: String,
    pub paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub description: String,
    pub anchor: String,
    pub comparison: Comparison,
    pub rel_tol: f64,
    pub grid_size: usize,
    pub max_rel_err: f64,
    pub argmax: Option<String>,
    pub failed_points: usize,
    pub pass: bool,
    pub wall_time_s: f64,
    pub sides: Vec<SideInfo>,
    pub points: Vec<PointResult>,
}

/// Tolerance overrides and parallelism for a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Replaces every case's tolerance.
    pub tol: Option<f64>,
    /// Per-id tolerances, applied after `tol`.
    pub tol_by_id: Vec<(String, f64)>,
    /// `None`: rayon default; `Some(0)`: sequential; `Some(n)`: n workers.
    pub threads: Option<usize>,
}

impl RunOptions {
    /// Default options with the thread cap read from `THORINKIT_THREADS`.
    pub fn from_env() -> Result<Self, VerifyError> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => {
                Some(v.trim().parse::<usize>().map_err(|_| VerifyError::BadThreads(v.clone()))?)
            }
            _ => None,
        };
        Ok(RunOptions { threads, ..Default::default() })
    }

    fn tolerance_for(&self, case: &IdentityCase) -> Result<f64, VerifyError> {
        let mut tol = self.tol.unwrap_or(case.rel_tol);
        for (id, t) in &self.tol_by_id {
            if id.eq_ignore_ascii_case(case.id) {
                tol = *t;
            }
        }
        if tol > 0.0 && tol.is_finite() {
            Ok(tol)
        } else {
            Err(VerifyError::BadTolerance(tol))
        }
    }

    fn install<T: Send>(&self, job: impl FnOnce(bool) -> T + Send) -> Result<T, VerifyError> {
        match self.threads {
            Some(0) => Ok(job(false)),
            None => Ok(job(true)),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| VerifyError::ThreadPool(e.to_string()))?;
                Ok(pool.install(|| job(true)))
            }
        }
    }
}

fn map_ordered<T: Sync, U: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if a == b {
        0.0
    } else if scale == 0.0 || !scale.is_finite() {
        f64::INFINITY
    } else {
        (a - b).abs() / scale
    }
}

fn evaluate_point(case: &IdentityCase, point: &Point) -> PointResult {
    let params = point.to_string();
    let mut values = Vec::with_capacity(case.sides.len());
    for side in &case.sides {
        match (side.eval)(point) {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return failed(params, side.name, format!("non-finite value {v}"));
            }
            Err(e) => return failed(params, side.name, e.0),
        }
    }
    let lhs = values[0];
    let (rhs, rel_err) = match case.comparison {
        Comparison::Equal => values[1..]
            .iter()
            .map(|&v| (v, rel_gap(lhs, v)))
            .fold((values[1], -1.0), |best, cur| if cur.1 > best.1 { cur } else { best }),
        Comparison::AtMost => {
            let r = values[1];
            (r, ((lhs - r) / r.abs()).max(0.0))
        }
        Comparison::Exceeds => {
            let r = values[1];
            (r, if lhs > r { 0.0 } else { f64::INFINITY })
        }
    };
    PointResult { params, lhs, rhs, rel_err, status: PointStatus::Ok }
}

fn failed(params: String, side: &str, message: String) -> PointResult {
    PointResult {
        params,
        lhs: f64::NAN,
        rhs: f64::NAN,
        rel_err: f64::INFINITY,
        status: PointStatus::Failed { side: side.to_string(), message },
    }
}

fn run_case(
    case: &IdentityCase,
    grid: Option<&GridOverride>,
    opts: &RunOptions,
    parallel: bool,
) -> Result<VerificationReport, VerifyError> {
    let tol = opts.tolerance_for(case)?;
    let points = case.points(grid)?;
    let start = Instant::now();
    let results = map_ordered(&points, parallel, |p| evaluate_point(case, p));
    let wall_time_s = start.elapsed().as_secs_f64();
    let failed_points = results.iter().filter(|r| r.status != PointStatus::Ok).count();
    let mut max_rel_err = 0.0;
    let mut argmax = None;
    for r in &results {
        if argmax.is_none() || r.rel_err > max_rel_err {
            max_rel_err = r.rel_err;
            argmax = Some(r.params.clone());
        }
    }
    Ok(VerificationReport {
        id: case.id.to_string(),
        description: case.description.to_string(),
        anchor: case.anchor.to_string(),
        comparison: case.comparison,
        rel_tol: tol,
        grid_size: points.len(),
        max_rel_err,
        argmax,
        failed_points,
        pass: failed_points == 0 && max_rel_err <= tol,
        wall_time_s,
        sides: case
            .sides
            .iter()
            .map(|s| SideInfo { name: s.name.to_string(), paths: s.paths.iter().map(|p| p.to_string()).collect() })
            .collect(),
        points: results,
    })
}

/// Looks up a registry entry by id (case-insensitive).
pub fn find_case(id: &str) -> Result<IdentityCase, VerifyError> {
    registry()
        .into_iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| VerifyError::UnknownIdentity(id.to_string()))
}

/// Runs one identity. Points where a side fails are kept as failed rows.
pub fn run_identity(
    case: &IdentityCase,
    grid: Option<&GridOverride>,
    opts: &RunOptions,
) -> Result<VerificationReport, VerifyError> {
    opts.install(|parallel| run_case(case, grid, opts, parallel))?
}

/// Runs the listed identities in the given order.
pub fn run_selected(ids: &[&str], opts: &RunOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    let cases = ids.iter().map(|id| find_case(id)).collect::<Result<Vec<_>, _>>()?;
    run_cases(&cases, opts)
}

/// Runs the full registry.
pub fn run_all(opts: &RunOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    run_cases(&registry(), opts)
}

fn run_cases(cases: &[IdentityCase], opts: &RunOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    opts.install(|parallel| map_ordered(cases, parallel, |c| run_case(c, None, opts, parallel)))?
        .into_iter()
        .collect()
}

/// Pass/fail fold over a set of reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.id.clone()).collect();
        Summary { total: reports.len(), passed: reports.len() - failed.len(), failed }
    }

    pub fn all_pass(&self) -> bool {
        self.failed.is_empty()
    }
}
