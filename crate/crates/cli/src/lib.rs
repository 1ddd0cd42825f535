//! The `condsym` command line: residual checks of the solution catalog,
//! transformed solutions, the transformed-`W^I` identity, the commutator
//! table and finite-difference checks of the jets.
//!
//! Reports go to stdout as JSON (default) or CSV, a short summary goes to
//! stderr. Exit codes: 0 everything passed, 1 something failed, 2 usage or
//! domain error.

use std::io::Write;
use std::ops::RangeInclusive;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use condsym_core::symmetry::{
    commutator_gap, derivative_law_gap, expected_commutator, generator_window, pushforward_identity, LawForm,
};
use condsym_core::verify::{interior_points, FdReport, FD_STEP, FD_TOL};
use condsym_core::{
    catalog, fd_crosscheck, make_random_polynomial, pushforward_field, run_residual_suite, GridSpec, GroupElement,
    ModelParams, Point, Polynomial, ResidualKind, ResidualReport, ScalarField, SolutionFamily,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const IDENTITY_TOL: f64 = 1e-8;
const COMMUTATOR_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "condsym", version, about = "Checks conditional symmetries and exact solutions of W^I-type diffusion equations")]
pub struct Cli {
    /// Output format for the report stream on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Pass threshold; each subcommand has its own default
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residuals of a solution family or random field over a grid
    Check {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        model: Model,
        /// Grid such as t=0.5:2:10,x=-1:1:10
        #[arg(long)]
        grid: Option<String>,
        /// Residuals to evaluate (diffusion, monge-ampere, z0-diffusion, general:0, general:1);
        /// defaults to the family's designated set
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
    },
    /// Push a solution family forward by a group element and re-check it
    Transform {
        #[arg(long)]
        family: String,
        /// Group element such as Xn:n=1,eps=0.01 or rot:a=1,b=2,angle=0.3
        #[arg(long)]
        element: String,
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Transformed-W^I identity and derivative laws for X_n elements
    Identity {
        #[command(flatten)]
        source: Source,
        /// Dynamical exponents, comma separated
        #[arg(long, value_delimiter = ',', default_value = "2")]
        z: Vec<f64>,
        #[arg(long = "N", default_value_t = 2)]
        n_dim: usize,
        /// Range A..B of n
        #[arg(long, allow_hyphen_values = true, default_value = "-1..3")]
        n: String,
        /// Group parameter; clamped per (n, z) to stay on the small-parameter branch
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.01)]
        eps: f64,
        /// Sampled points per (n, z)
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Commutator table of the generators X_n, Y_k, J_ab
    Commutators {
        #[arg(long, allow_hyphen_values = true, default_value = "-2..2")]
        n: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1..2")]
        k: String,
        #[arg(long = "N", default_value_t = 2)]
        n_dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        z: Vec<f64>,
        /// Seed of the three polynomial test functions
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare jets with central differences
    FdCheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = FD_STEP)]
        h: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        grid: Option<String>,
    },
    /// List solution families, profiles and group elements
    Catalog,
}

#[derive(Debug, clap::Args)]
pub struct Source {
    /// Solution family, e.g. radial-z1:c=1,e1=0,e2=0,n=0
    #[arg(long, conflicts_with = "field")]
    pub family: Option<String>,
    /// Random polynomial field, random:deg=3[,seed=S]
    #[arg(long)]
    pub field: Option<String>,
    /// Seed for random fields and sampling
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct Model {
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long = "N")]
    pub n_dim: Option<usize>,
}

/// A usage or domain error; always exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

/// Parses `argv` (including the program name), writes reports to `out` and
/// the summary to `err`, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_PASS;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(UsageError(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
    }
}

enum FieldSource {
    Family(SolutionFamily),
    Random { degree: u32, seed: u64 },
}

impl FieldSource {
    fn from_args(src: &Source) -> CliResult<Self> {
        match (&src.family, &src.field) {
            (Some(f), None) => Ok(Self::Family(f.parse()?)),
            (None, Some(f)) => {
                let body = f
                    .strip_prefix("random:")
                    .ok_or_else(|| UsageError(format!("unknown field `{f}`, expected random:deg=D[,seed=S]")))?;
                let (mut degree, mut seed) = (3u32, None);
                for kv in body.split(',').filter(|s| !s.is_empty()) {
                    match kv.split_once('=') {
                        Some(("deg", v)) => degree = v.parse().map_err(|_| UsageError(format!("bad degree `{v}`")))?,
                        Some(("seed", v)) => seed = Some(v.parse().map_err(|_| UsageError(format!("bad seed `{v}`")))?),
                        _ => return Err(UsageError(format!("bad field option `{kv}`"))),
                    }
                }
                let seed = seed
                    .or(src.seed)
                    .ok_or_else(|| UsageError("random fields need --seed (or seed= inside --field)".into()))?;
                Ok(Self::Random { degree, seed })
            }
            (None, None) => Err(UsageError("one of --family or --field is required".into())),
            (Some(_), Some(_)) => Err(UsageError("--family and --field are exclusive".into())),
        }
    }

    fn params(&self, model: &Model) -> CliResult<ModelParams> {
        match self {
            Self::Family(f) => {
                let d = f.default_params();
                let p = ModelParams::new(model.n_dim.unwrap_or(d.spatial_dim), model.z.unwrap_or(d.z))?;
                f.check_params(&p)?;
                Ok(p)
            }
            Self::Random { .. } => Ok(ModelParams::new(model.n_dim.unwrap_or(2), model.z.unwrap_or(1.0))?),
        }
    }

    fn field(&self, params: &ModelParams) -> CliResult<Box<dyn ScalarField>> {
        match self {
            Self::Family(f) => Ok(Box::new(f.clone())),
            Self::Random { degree, seed } => Ok(Box::new(make_random_polynomial(*seed, params, *degree, 1.0)?)),
        }
    }
}

fn parse_range(s: &str) -> CliResult<RangeInclusive<i32>> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| UsageError(format!("range `{s}` is not A..B")))?;
    let a: i32 = a.trim().parse().map_err(|_| UsageError(format!("bad range start `{a}`")))?;
    let b: i32 = b.trim().parse().map_err(|_| UsageError(format!("bad range end `{b}`")))?;
    if a > b {
        return Err(UsageError(format!("empty range {s}")));
    }
    Ok(a..=b)
}

fn grid_for(spec: &Option<String>, n: usize) -> CliResult<GridSpec> {
    match spec {
        Some(s) => Ok(GridSpec::parse(s, n)?),
        None => Ok(GridSpec::default_for(n)),
    }
}

/// Largest `|ε|` keeping `z n ε t^n` below 0.4 on `t ∈ [0.5, 2]`, capped at
/// 0.02, so every sampled point lies on the small-parameter branch.
pub fn clamp_eps(eps: f64, n: i32, z: f64) -> f64 {
    let zn = (z * n as f64).abs();
    if zn == 0.0 {
        return eps.clamp(-0.02, 0.02);
    }
    let tmax = 0.5f64.powi(n).max(2.0f64.powi(n));
    let bound = (0.4 / (zn * tmax)).min(0.02);
    eps.clamp(-bound, bound)
}

/// Uniform points in `[0.5, 2] × [−1, 1]^N`.
pub fn sample_points(seed: u64, n_dim: usize, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = rng.gen_range(0.5..=2.0);
            Point::new(t, (0..n_dim).map(|_| rng.gen_range(-1.0..=1.0)).collect::<Vec<_>>())
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
struct ReportRow {
    equation: String,
    field: String,
    points_evaluated: usize,
    points_excluded: usize,
    max_abs: f64,
    max_abs_raw: f64,
    rms: f64,
    worst_point: String,
    tolerance: f64,
    pass: bool,
}

impl From<&ResidualReport> for ReportRow {
    fn from(r: &ResidualReport) -> Self {
        Self {
            equation: r.equation.clone(),
            field: r.field.clone(),
            points_evaluated: r.points_evaluated,
            points_excluded: r.points_excluded,
            max_abs: r.max_abs,
            max_abs_raw: r.max_abs_raw,
            rms: r.rms,
            worst_point: r.worst_point.as_ref().map(point_str).unwrap_or_default(),
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

fn point_str(p: &Point) -> String {
    p.to_vec().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Identity and derivative-law statistics for one `(n, z)`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub field: String,
    pub n: i32,
    pub z: f64,
    #[serde(rename = "N")]
    pub n_dim: usize,
    pub eps: f64,
    pub points: usize,
    /// Largest normalized gap of the transformed-`W^I` identity.
    pub max_gap: f64,
    /// Largest relative deviation from the derivative laws.
    pub max_law_gap: f64,
    pub max_obstruction: f64,
    /// Some point has `|W_N^II| > 0.1` and an obstruction above `1e−3·|ε|`.
    pub obstruction_witnessed: bool,
    pub tolerance: f64,
    pub pass: bool,
}

/// One commutator `[v, w]` checked on all test functions and points.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorRow {
    pub z: f64,
    #[serde(rename = "N")]
    pub n_dim: usize,
    pub left: String,
    pub right: String,
    pub expected: String,
    pub max_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
struct FdRow {
    field: String,
    points: usize,
    step: f64,
    max_rel_error: f64,
    worst_point: String,
    tolerance: f64,
    pass: bool,
}

impl From<&FdReport> for FdRow {
    fn from(r: &FdReport) -> Self {
        Self {
            field: r.field.clone(),
            points: r.points,
            step: r.step,
            max_rel_error: r.max_rel_error,
            worst_point: r.worst_point.as_ref().map(point_str).unwrap_or_default(),
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct CatalogRow {
    kind: String,
    spec: String,
    #[serde(rename = "N")]
    n_dim: String,
    z: String,
    residuals: String,
    grid: String,
    tolerance: f64,
}

fn emit<T: Serialize, J: Serialize>(format: Format, json: &J, rows: &[T], out: &mut dyn Write) -> CliResult<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, json)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn parse_kinds(kinds: &[String], fam: Option<&SolutionFamily>) -> CliResult<Vec<ResidualKind>> {
    if kinds.is_empty() {
        return match fam {
            Some(f) => Ok(f.checked_residuals()),
            None => Ok(vec![ResidualKind::Diffusion, ResidualKind::MongeAmpere]),
        };
    }
    kinds
        .iter()
        .map(|k| {
            let k = ResidualKind::parse(k)?;
            if k.is_reduced() {
                return Err(UsageError(format!("{k} applies to fields over (ω1, ω2), not to check")));
            }
            Ok(k)
        })
        .collect()
}

fn residual_summary(reports: &[ResidualReport], err: &mut dyn Write) -> CliResult<bool> {
    let mut all = true;
    for r in reports {
        writeln!(
            err,
            "[{}] {} on {}: max {:.3e} over {} points ({} excluded)",
            if r.pass { "PASS" } else { "FAIL" },
            r.equation,
            r.field,
            r.max_abs,
            r.points_evaluated,
            r.points_excluded
        )?;
        all &= r.pass;
    }
    Ok(all)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<bool> {
    match &cli.command {
        Command::Check {
            source,
            model,
            grid,
            kinds,
        } => {
            let src = FieldSource::from_args(source)?;
            let params = src.params(model)?;
            let field = src.field(&params)?;
            let fam = match &src {
                FieldSource::Family(f) => Some(f),
                _ => None,
            };
            let kinds = parse_kinds(kinds, fam)?;
            let grid = grid_for(grid, params.spatial_dim)?;
            let tol = cli.tol.unwrap_or(condsym_core::verify::DEFAULT_TOL);
            let reports = run_residual_suite(field.as_ref(), &kinds, &params, &grid, tol)?;
            let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();
            emit(cli.format, &reports, &rows, out)?;
            residual_summary(&reports, err)
        }
        Command::Transform {
            family,
            element,
            model,
            grid,
        } => {
            let fam: SolutionFamily = family.parse()?;
            let g: GroupElement = element.parse()?;
            let params = FieldSource::Family(fam.clone()).params(model)?;
            let moved = pushforward_field(&g, &params, fam.clone())?;
            let grid = grid_for(grid, params.spatial_dim)?;
            let tol = cli.tol.unwrap_or(condsym_core::verify::DEFAULT_TOL);
            let reports = run_residual_suite(&moved, &fam.checked_residuals(), &params, &grid, tol)?;
            let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();
            emit(cli.format, &reports, &rows, out)?;
            residual_summary(&reports, err)
        }
        Command::Identity {
            source,
            z,
            n_dim,
            n,
            eps,
            points,
        } => {
            let src = FieldSource::from_args(source)?;
            let range = parse_range(n)?;
            let tol = cli.tol.unwrap_or(IDENTITY_TOL);
            let sample_seed = match &src {
                FieldSource::Random { seed, .. } => *seed,
                FieldSource::Family(_) => source.seed.unwrap_or(0),
            };
            let mut rows = Vec::new();
            for &zv in z {
                let params = src.params(&Model {
                    z: Some(zv),
                    n_dim: Some(*n_dim),
                })?;
                let field = src.field(&params)?;
                for nv in range.clone() {
                    rows.push(identity_row(field.as_ref(), &params, nv, *eps, *points, sample_seed, tol)?);
                }
            }
            emit(cli.format, &rows, &rows, out)?;
            let mut all = true;
            for r in &rows {
                writeln!(
                    err,
                    "[{}] n={} z={} N={}: gap {:.3e}, law gap {:.3e}, obstruction {:.3e}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.n,
                    r.z,
                    r.n_dim,
                    r.max_gap,
                    r.max_law_gap,
                    r.max_obstruction
                )?;
                all &= r.pass;
            }
            Ok(all)
        }
        Command::Commutators { n, k, n_dim, z, seed } => {
            let ns = parse_range(n)?;
            let ks = parse_range(k)?;
            let tol = cli.tol.unwrap_or(COMMUTATOR_TOL);
            let mut rows = Vec::new();
            for &zv in z {
                let params = ModelParams::new(*n_dim, zv)?;
                rows.extend(commutator_rows(&params, ns.clone(), ks.clone(), *seed, tol)?);
            }
            emit(cli.format, &rows, &rows, out)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            writeln!(err, "{} commutators checked, {failed} failed", rows.len())?;
            for r in rows.iter().filter(|r| !r.pass) {
                writeln!(err, "[FAIL] [{}, {}] z={}: gap {:.3e}", r.left, r.right, r.z, r.max_gap)?;
            }
            Ok(failed == 0)
        }
        Command::FdCheck {
            source,
            model,
            h,
            points,
            grid,
        } => {
            let src = FieldSource::from_args(source)?;
            let params = src.params(model)?;
            let field = src.field(&params)?;
            let grid = grid_for(grid, params.spatial_dim)?;
            let tol = cli.tol.unwrap_or(FD_TOL);
            let sample_seed = match &src {
                FieldSource::Random { seed, .. } => *seed,
                FieldSource::Family(_) => source.seed.unwrap_or(0),
            };
            let pts = interior_points(field.as_ref(), &params, &grid, *points, *h, sample_seed);
            if pts.len() < *points {
                return Err(UsageError(format!(
                    "only {} of {points} interior points found for {}",
                    pts.len(),
                    field.label()
                )));
            }
            let report = fd_crosscheck(field.as_ref(), &params, &pts, *h, tol)?;
            emit(cli.format, &report, &[FdRow::from(&report)], out)?;
            writeln!(
                err,
                "[{}] {}: max relative error {:.3e} over {} points",
                if report.pass { "PASS" } else { "FAIL" },
                report.field,
                report.max_rel_error,
                report.points
            )?;
            Ok(report.pass)
        }
        Command::Catalog => {
            let tol = cli.tol.unwrap_or(condsym_core::verify::DEFAULT_TOL);
            let rows = catalog_rows(tol);
            emit(cli.format, &rows, &rows, out)?;
            writeln!(err, "{} catalog entries", rows.len())?;
            Ok(true)
        }
    }
}

/// Samples `points` points for `X_n(ε)` (with `ε` clamped) and collects the
/// identity, derivative-law and obstruction statistics.
pub fn identity_row(
    field: &dyn ScalarField,
    params: &ModelParams,
    n: i32,
    eps: f64,
    points: usize,
    seed: u64,
    tol: f64,
) -> CliResult<IdentityRow> {
    let eps = clamp_eps(eps, n, params.z);
    let g = GroupElement::xn(n, eps);
    let mut row = IdentityRow {
        field: field.label(),
        n,
        z: params.z,
        n_dim: params.spatial_dim,
        eps,
        points: 0,
        max_gap: 0.0,
        max_law_gap: 0.0,
        max_obstruction: 0.0,
        obstruction_witnessed: false,
        tolerance: tol,
        pass: false,
    };
    let mix = seed ^ ((n as i64 as u64) << 32) ^ (params.z.to_bits().rotate_left(7));
    for p in sample_points(mix, params.spatial_dim, points) {
        let c = match pushforward_identity(&g, params, field, &p, LawForm::Derived) {
            Ok(c) => c,
            Err(condsym_core::Error::Domain(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let law = derivative_law_gap(&g, params, field, &p)?;
        row.points += 1;
        row.max_gap = row.max_gap.max(nan_inf(c.normalized_gap()));
        row.max_law_gap = row.max_law_gap.max(nan_inf(law));
        row.max_obstruction = row.max_obstruction.max(c.obstruction_term.abs());
        row.obstruction_witnessed |= c.monge_ampere.abs() > 0.1 && c.obstruction_term.abs() > 1e-3 * eps.abs();
    }
    let exceptional = params.z != 0.0 && (n == -1 || n == 0);
    row.pass = row.points > 0
        && row.max_gap <= tol
        && row.max_law_gap <= tol
        && (!exceptional || row.max_obstruction == 0.0);
    Ok(row)
}

fn nan_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Test points in `(t, x, u)` for the commutator checks.
fn commutator_points(n_dim: usize) -> Vec<Vec<f64>> {
    [(1.3, 0.4, 0.8), (0.7, -0.6, 1.5), (1.9, 0.25, -0.9)]
        .iter()
        .map(|&(t, x0, u)| {
            let mut p = vec![t];
            p.extend((0..n_dim).map(|i| x0 - 0.35 * i as f64));
            p.push(u);
            p
        })
        .collect()
}

/// Every commutator of the generator window, checked against the table on
/// three random cubic test functions.
pub fn commutator_rows(
    params: &ModelParams,
    ns: RangeInclusive<i32>,
    ks: RangeInclusive<i32>,
    seed: u64,
    tol: f64,
) -> CliResult<Vec<CommutatorRow>> {
    let d = params.spatial_dim;
    let tests: Vec<Polynomial> = (0..3).map(|i| Polynomial::random(d + 2, 3, 1.0, seed + i)).collect();
    let pts = commutator_points(d);
    let gens = generator_window(ns, ks, d);
    let mut rows = Vec::new();
    for v in &gens {
        for w in &gens {
            let e = expected_commutator(v, w, params.z);
            let mut gap = 0.0f64;
            for f in &tests {
                for p in &pts {
                    gap = gap.max(nan_inf(commutator_gap(v, w, &e, params, f, p)?));
                }
            }
            let both_y = matches!(
                (v, w),
                (
                    condsym_core::AlgebraGenerator::Y { .. },
                    condsym_core::AlgebraGenerator::Y { .. }
                )
            );
            let expected = if e.is_empty() {
                "0".to_string()
            } else {
                e.iter().map(|(c, g)| format!("{c}*{g}")).collect::<Vec<_>>().join(" + ")
            };
            rows.push(CommutatorRow {
                z: params.z,
                n_dim: d,
                left: v.to_string(),
                right: w.to_string(),
                expected,
                max_gap: gap,
                tolerance: tol,
                pass: gap <= tol && (!both_y || gap == 0.0),
            });
        }
    }
    Ok(rows)
}

fn catalog_rows(tol: f64) -> Vec<CatalogRow> {
    let mut rows: Vec<CatalogRow> = catalog()
        .into_iter()
        .map(|e| CatalogRow {
            kind: "family".into(),
            spec: e.family.to_string(),
            n_dim: e.params.spatial_dim.to_string(),
            z: e.params.z.to_string(),
            residuals: e
                .family
                .checked_residuals()
                .iter()
                .map(|k| k.label())
                .collect::<Vec<_>>()
                .join(" "),
            grid: GridSpec::default_for(e.params.spatial_dim).to_string(),
            tolerance: tol,
        })
        .collect();
    let extra = [
        ("profile", "poly:c0,c1,...  exp:a,b  sin:a,b,c  const:c"),
        ("field", "random:deg=D[,seed=S]"),
        ("element", "Xn:n=N,eps=E[,lambda=L]"),
        ("element", "Yk:k=K,v=V1,...,VN"),
        ("element", "Yphi:e=E1,...,EN;profiles=P1|...|PN"),
        ("element", "rot:a=A,b=B,angle=W"),
        ("shift", "<family>+Yphi:e=E1,E2;profiles=P1|P2"),
    ];
    rows.extend(extra.iter().map(|(kind, spec)| CatalogRow {
        kind: (*kind).into(),
        spec: (*spec).into(),
        n_dim: String::new(),
        z: String::new(),
        residuals: String::new(),
        grid: String::new(),
        tolerance: tol,
    }));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["condsym"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1..3").unwrap(), -1..=3);
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("1-3").is_err());
    }

    #[test]
    fn eps_clamp_keeps_the_branch() {
        for n in -2..=3 {
            for z in [0.5, 1.0, 2.0, 3.0] {
                let e = clamp_eps(0.02, n, z);
                for t in [0.5f64, 1.0, 2.0] {
                    assert!(1.0 - z * n as f64 * e * t.powi(n) >= 0.6 - 1e-12);
                    assert!(1.0 + z * n as f64 * e * t.powi(n) >= 0.6 - 1e-12);
                }
            }
        }
    }

    #[test]
    fn check_radial() {
        let (code, out, err) = call(&["check", "--family", "radial-z1:c=1,e1=0,e2=0,n=0", "--z", "1", "--N", "2"]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["check", "--bogus"]).0, 2);
        assert_eq!(call(&["check", "--family", "nope:c=1"]).0, 2);
        assert_eq!(call(&["check", "--family", "radial-z1:c=1,e1=0,e2=0,n=0", "--z", "2"]).0, 2);
        assert_eq!(call(&["check", "--field", "random:deg=3"]).0, 2);
        assert_eq!(call(&["identity", "--field", "random:deg=3", "--n", "3..1", "--seed", "1"]).0, 2);
    }

    #[test]
    fn random_field_fails_check() {
        let (code, _, _) = call(&["check", "--field", "random:deg=3,seed=4", "--z", "2", "--N", "2", "--kinds", "monge-ampere"]);
        assert_eq!(code, 1);
    }
}
