//! Tensor grids, residual aggregation and finite-difference cross-checks.
//!
//! Grid points are evaluated in parallel; every reduction runs sequentially
//! in grid order so reports are bitwise reproducible.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fields::{Coords, ModelParams, PlaneField, Point, ScalarField};
use crate::jet2::Jet2;
use crate::operators::{evaluate_residual, ResidualKind};

/// Default normalized tolerance for closed-form solutions.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default relative tolerance for finite-difference cross-checks.
pub const FD_TOL: f64 = 1e-4;
/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-4;
/// Minimum distance of a finite-difference sample from a field's singular set.
pub const INTERIOR_CLEARANCE: f64 = 0.1;

/// `count` equispaced samples of `[lo, hi]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 || !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "axis needs lo < hi and at least 2 samples, got {lo}:{hi}:{count}"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn sample(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `lo:hi:count`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            return Err(Error::Parse(format!("axis `{s}` is not lo:hi:count")));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{v}`")));
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad sample count `{count}`")))?;
        Axis::new(num(lo)?, num(hi)?, count).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

/// Tensor grid over `t` and each spatial axis. Points failing a field's
/// domain predicate are excluded at evaluation time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub t: Axis,
    pub x: Vec<Axis>,
}

impl GridSpec {
    pub fn new(t: Axis, x: Vec<Axis>) -> Self {
        Self { t, x }
    }

    /// `t ∈ [0.5, 2]`, `x ∈ [−1, 1]^N` with enough samples that families
    /// excluding up to half the grid still keep 1000 admissible points.
    pub fn default_for(spatial_dim: usize) -> Self {
        let (nt, nx) = match spatial_dim {
            1 => (32, 32),
            2 => (16, 16),
            _ => (6, 10),
        };
        Self {
            t: Axis { lo: 0.5, hi: 2.0, count: nt },
            x: vec![Axis { lo: -1.0, hi: 1.0, count: nx }; spatial_dim],
        }
    }

    pub fn spatial_dim(&self) -> usize {
        self.x.len()
    }

    pub fn len(&self) -> usize {
        self.x.iter().fold(self.t.count, |acc, a| acc * a.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th point, `t` slowest and the last spatial axis fastest.
    pub fn point(&self, mut i: usize) -> Point {
        let mut x = vec![0.0; self.x.len()];
        for (a, axis) in self.x.iter().enumerate().rev() {
            x[a] = axis.sample(i % axis.count);
            i /= axis.count;
        }
        Point::new(self.t.sample(i), x)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Parses `t=lo:hi:n,x=lo:hi:n` (every spatial axis) or
    /// `t=…,x1=…,x2=…` (one entry per axis).
    pub fn parse(s: &str, spatial_dim: usize) -> Result<Self> {
        let mut t = None;
        let mut all = None;
        let mut each = vec![None; spatial_dim];
        for part in s.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("grid entry `{part}` is not key=lo:hi:n")))?;
            let axis: Axis = v.parse()?;
            match k.trim() {
                "t" => t = Some(axis),
                "x" => all = Some(axis),
                k => {
                    let a = k
                        .strip_prefix('x')
                        .and_then(|i| i.parse::<usize>().ok())
                        .filter(|&i| i >= 1 && i <= spatial_dim)
                        .ok_or_else(|| Error::Parse(format!("unknown grid axis `{k}`")))?;
                    each[a - 1] = Some(axis);
                }
            }
        }
        let defaults = Self::default_for(spatial_dim);
        let x = each
            .into_iter()
            .zip(defaults.x)
            .map(|(e, d)| e.or(all).unwrap_or(d))
            .collect();
        Ok(Self {
            t: t.unwrap_or(defaults.t),
            x,
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={}", self.t)?;
        for (a, axis) in self.x.iter().enumerate() {
            write!(f, ",x{}={axis}", a + 1)?;
        }
        Ok(())
    }
}

/// Residual statistics of one equation over one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub equation: String,
    pub field: String,
    pub points_evaluated: usize,
    pub points_excluded: usize,
    /// Largest scale-normalized residual.
    pub max_abs: f64,
    /// Largest raw residual.
    pub max_abs_raw: f64,
    /// Root mean square of the normalized residuals.
    pub rms: f64,
    pub worst_point: Option<Point>,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    /// Aggregates per-point outcomes in order; `None` marks an excluded point.
    pub fn aggregate(
        equation: String,
        field: String,
        samples: impl IntoIterator<Item = (Point, Option<(f64, f64)>)>,
        tolerance: f64,
    ) -> Self {
        let (mut evaluated, mut excluded) = (0usize, 0usize);
        let (mut max, mut max_raw, mut sum_sq) = (0.0f64, 0.0f64, 0.0f64);
        let mut worst = None;
        for (p, r) in samples {
            let Some((norm, raw)) = r else {
                excluded += 1;
                continue;
            };
            evaluated += 1;
            // non-finite residuals are failures, not exclusions
            let norm = if norm.is_finite() { norm.abs() } else { f64::INFINITY };
            if norm > max || worst.is_none() {
                max = max.max(norm);
                worst = Some(p);
            }
            max_raw = max_raw.max(if raw.is_finite() { raw.abs() } else { f64::INFINITY });
            sum_sq += norm * norm;
        }
        let rms = if evaluated > 0 {
            (sum_sq / evaluated as f64).sqrt().min(max)
        } else {
            0.0
        };
        let total = evaluated + excluded;
        let pass = evaluated > 0 && max <= tolerance && 2 * excluded <= total;
        Self {
            equation,
            field,
            points_evaluated: evaluated,
            points_excluded: excluded,
            max_abs: max,
            max_abs_raw: max_raw,
            rms,
            worst_point: worst,
            tolerance,
            pass,
        }
    }
}

/// Evaluates `field` over `grid` and reports each residual in `kinds`.
/// Domain errors, at the field or inside a residual, become exclusions.
pub fn run_residual_suite(
    field: &dyn ScalarField,
    kinds: &[ResidualKind],
    params: &ModelParams,
    grid: &GridSpec,
    tol: f64,
) -> Result<Vec<ResidualReport>> {
    if grid.spatial_dim() != params.spatial_dim {
        return Err(Error::DimensionMismatch {
            expected: params.spatial_dim,
            found: grid.spatial_dim(),
        });
    }
    let jets: Vec<(Point, Option<Jet2>)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let p = grid.point(i);
            let j = field.evaluate(params, &p).ok();
            (p, j)
        })
        .collect();
    let label = field.label();
    Ok(kinds
        .iter()
        .map(|kind| {
            let samples = jets.iter().map(|(p, j)| {
                let r = j
                    .as_ref()
                    .and_then(|j| evaluate_residual(kind, j, params).ok())
                    .map(|r| (r.normalized(), r.raw));
                (p.clone(), r)
            });
            ResidualReport::aggregate(kind.label(), label.clone(), samples, tol)
        })
        .collect())
}

/// Like [`run_residual_suite`] for fields over `(ω_1, ω_2)`; the grid's
/// `t` axis gives the time slices. Only the reduced residual kinds apply.
pub fn run_plane_suite(
    field: &dyn PlaneField,
    kinds: &[ResidualKind],
    z: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<Vec<ResidualReport>> {
    if grid.spatial_dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: grid.spatial_dim(),
        });
    }
    if let Some(k) = kinds.iter().find(|k| !k.is_reduced()) {
        return Err(Error::InvalidArgument(format!("{k} is not a reduced residual")));
    }
    let params = ModelParams { spatial_dim: 2, z };
    let jets: Vec<(Point, Option<Jet2>)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let p = grid.point(i);
            let j = field.eval_plane(&p).ok();
            (p, j)
        })
        .collect();
    Ok(kinds
        .iter()
        .map(|kind| {
            let samples = jets.iter().map(|(p, j)| {
                let r = j
                    .as_ref()
                    .and_then(|j| evaluate_residual(kind, j, &params).ok())
                    .map(|r| (r.normalized(), r.raw));
                (p.clone(), r)
            });
            ResidualReport::aggregate(kind.label(), field.label(), samples, tol)
        })
        .collect())
}

/// Outcome of comparing jets against central differences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdReport {
    pub field: String,
    pub points: usize,
    pub step: f64,
    /// Largest `|ad − fd| / max(1, |ad|)` over all first and second derivatives.
    pub max_rel_error: f64,
    pub worst_point: Option<Point>,
    pub tolerance: f64,
    pub pass: bool,
}

fn value_at(field: &dyn ScalarField, params: &ModelParams, p: &Point) -> Result<f64> {
    Ok(field.eval_coords(params, &Coords::constant(1, p))?.value())
}

fn shifted(p: &[f64], moves: &[(usize, f64)]) -> Point {
    let mut v = p.to_vec();
    for &(i, d) in moves {
        v[i] += d;
    }
    Point::from_slice(&v)
}

/// Largest relative deviation at `p` between the jet and second-order
/// central differences with step `h`.
pub fn fd_error_at(field: &dyn ScalarField, params: &ModelParams, p: &Point, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let jet = field.evaluate(params, p)?;
    let v = p.to_vec();
    let d = v.len();
    let f = |moves: &[(usize, f64)]| -> Result<f64> {
        value_at(field, params, &shifted(&v, moves))
            .map_err(|e| domain(format!("finite-difference stencil left the domain: {e}")))
    };
    let rel = |ad: f64, fd: f64| (ad - fd).abs() / ad.abs().max(1.0);
    let f0 = jet.value();
    let mut worst = 0.0f64;
    for i in 0..d {
        let (fp, fm) = (f(&[(i, h)])?, f(&[(i, -h)])?);
        worst = worst.max(rel(jet.d(i), (fp - fm) / (2.0 * h)));
        worst = worst.max(rel(jet.hess(i, i), (fp - 2.0 * f0 + fm) / (h * h)));
        for j in i + 1..d {
            let pp = f(&[(i, h), (j, h)])?;
            let pm = f(&[(i, h), (j, -h)])?;
            let mp = f(&[(i, -h), (j, h)])?;
            let mm = f(&[(i, -h), (j, -h)])?;
            worst = worst.max(rel(jet.hess(i, j), (pp - pm - mp + mm) / (4.0 * h * h)));
        }
    }
    Ok(worst)
}

/// Compares jets of `field` against central differences at every point.
pub fn fd_crosscheck(
    field: &dyn ScalarField,
    params: &ModelParams,
    points: &[Point],
    h: f64,
    tol: f64,
) -> Result<FdReport> {
    let errs = points
        .par_iter()
        .map(|p| fd_error_at(field, params, p, h))
        .collect::<Vec<_>>();
    let mut max = 0.0f64;
    let mut worst = None;
    for (p, e) in points.iter().zip(errs) {
        let e = e?;
        let e = if e.is_finite() { e } else { f64::INFINITY };
        if e > max || worst.is_none() {
            max = max.max(e);
            worst = Some(p.clone());
        }
    }
    Ok(FdReport {
        field: field.label(),
        points: points.len(),
        step: h,
        max_rel_error: max,
        worst_point: worst,
        tolerance: tol,
        pass: !points.is_empty() && max <= tol,
    })
}

/// Up to `count` uniformly drawn points of the grid's bounding box whose
/// whole stencil of radius `2h` lies inside the field's domain and which stay
/// `INTERIOR_CLEARANCE` away from its singular set.
pub fn interior_points(
    field: &dyn ScalarField,
    params: &ModelParams,
    grid: &GridSpec,
    count: usize,
    h: f64,
    seed: u64,
) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let axes: Vec<Axis> = std::iter::once(grid.t).chain(grid.x.iter().copied()).collect();
    for _ in 0..count * 50 {
        if out.len() == count {
            break;
        }
        let v: Vec<f64> = axes.iter().map(|a| rng.gen_range(a.lo..=a.hi)).collect();
        let p = Point::from_slice(&v);
        let inside = (0..v.len()).all(|i| {
            [-2.0 * h, 2.0 * h].iter().all(|&s| {
                [(i, s)]
                    .iter()
                    .all(|&m| value_at(field, params, &shifted(&v, &[m])).is_ok())
            })
        }) && (0..v.len()).all(|i| {
            (i + 1..v.len()).all(|j| {
                [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
                    .iter()
                    .all(|&(a, b)| value_at(field, params, &shifted(&v, &[(i, 2.0 * a * h), (j, 2.0 * b * h)])).is_ok())
            })
        });
        let clear = field
            .singular_distance(params, &p)
            .map_or(true, |d| d >= INTERIOR_CLEARANCE);
        if inside && clear && field.evaluate(params, &p).is_ok() {
            out.push(p);
        }
    }
    out
}
