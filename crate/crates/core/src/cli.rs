//! Command-line front end: `solve`, `verify`, `curve` and `dimension`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{coefficient_estimate, dimension_direct, dimension_regression, excess};
use crate::closed_form::{vn, ClosedFormReport, MAX_N};
use crate::error::{Error, Result};
use crate::geometry::ConstraintIndex;
use crate::oracle::{brute_force, OracleConfig, MAX_EXHAUSTIVE_N};
use crate::quantizer::{partition_of, solve_fixed_constraint, Quantizer, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Lloyd feet must match the reference to this.
pub const FEET_TOL: f64 = 1e-9;
/// Lloyd distortion must match the reference to this.
pub const DISTORTION_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "cquant",
    version,
    about = "Constrained quantization of the uniform distribution on [0, 1]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal n-point set by one method.
    Solve(SolveArgs),
    /// Cross-check Lloyd and brute force against the closed form.
    Verify(VerifyArgs),
    /// Error sequence table for plotting.
    Curve(CurveArgs),
    /// Log-log regression estimate of the quantization dimension.
    Dimension(DimensionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ClosedForm,
    Lloyd,
    BruteForce,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Lloyd => "lloyd",
            Method::BruteForce => "brute-force",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=i64::from(MAX_N)))]
    n: u32,
    #[arg(long, value_enum, default_value = "closed-form")]
    method: Method,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=4096))]
    n_max: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=i64::from(MAX_EXHAUSTIVE_N)))]
    oracle_n_max: u32,
}

#[derive(Debug, clap::Args)]
struct CurveArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=i64::from(MAX_N)))]
    n_max: u32,
    #[arg(long, value_enum, default_value = "geometric")]
    spacing: Spacing,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct DimensionArgs {
    #[arg(long, default_value_t = 64)]
    n_min: u32,
    #[arg(long, default_value_t = 16384)]
    n_max: u32,
    #[arg(long, default_value_t = 9)]
    samples: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Verify(a) => cmd_verify(&a, &|n| ClosedFormReport::new(n)),
        Command::Curve(a) => cmd_curve(&a),
        Command::Dimension(a) => cmd_dimension(&a),
    };
    match result {
        Ok(Output {
            text,
            path,
            code,
            diagnostics,
        }) => {
            let _ = err.write_all(diagnostics.as_bytes());
            if let Some(path) = path {
                if let Err(e) = std::fs::write(&path, text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            } else if out.write_all(text.as_bytes()).is_err() {
                return EXIT_NUMERICAL;
            }
            code
        }
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Output {
    text: String,
    path: Option<PathBuf>,
    code: i32,
    diagnostics: String,
}

impl Output {
    fn ok(text: String, path: Option<PathBuf>) -> Self {
        Self {
            text,
            path,
            code: EXIT_OK,
            diagnostics: String::new(),
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

fn numerical(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_NUMERICAL,
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub j: u32,
    pub x: f64,
    pub plane: [f64; 2],
    pub foot: f64,
}

/// Machine-readable result of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub n: u32,
    pub method: &'static str,
    pub constraint_index: u32,
    pub points: Vec<PointRecord>,
    pub breakpoints: Vec<f64>,
    pub distortion: f64,
    pub excess: f64,
    pub scaled_excess: f64,
}

impl OutputRecord {
    pub fn new(method: Method, q: &Quantizer, distortion: f64) -> Result<Self> {
        let n = q.len() as u32;
        let constraint_index = q
            .common_index()
            .unwrap_or_else(|| {
                q.points()
                    .iter()
                    .map(|p| p.index())
                    .max()
                    .expect("non-empty")
            })
            .get();
        let points = q
            .points()
            .iter()
            .map(|p| {
                let e = p.embed();
                PointRecord {
                    j: p.index().get(),
                    x: p.abscissa(),
                    plane: [e.x, e.y],
                    foot: p.foot(),
                }
            })
            .collect();
        let excess = distortion - crate::closed_form::v_infinity();
        Ok(Self {
            n,
            method: method.name(),
            constraint_index,
            points,
            breakpoints: partition_of(q)?.breakpoints().to_vec(),
            distortion,
            excess,
            scaled_excess: f64::from(n) * excess,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// One row per point, with its cell taken from the breakpoints.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "n,method,constraint_index,point,j,x,plane_x,plane_y,foot,cell_lo,cell_hi,distortion,excess,scaled_excess\n",
        );
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                self.n,
                self.method,
                self.constraint_index,
                i + 1,
                p.j,
                p.x,
                p.plane[0],
                p.plane[1],
                p.foot,
                self.breakpoints[i],
                self.breakpoints[i + 1],
                self.distortion,
                self.excess,
                self.scaled_excess
            );
        }
        s
    }
}

/// Runs one solver method for `n` points.
pub fn solve(
    n: u32,
    method: Method,
    solver: &SolverConfig,
    oracle_step: Option<f64>,
) -> std::result::Result<OutputRecord, (i32, Error)> {
    let fail = |code| move |e| (code, e);
    let (q, d) = match method {
        Method::ClosedForm => {
            let rep = ClosedFormReport::new(n).map_err(fail(EXIT_USAGE))?;
            let mut record =
                OutputRecord::new(method, &rep.points, rep.vn).map_err(fail(EXIT_NUMERICAL))?;
            record.excess = rep.excess;
            record.scaled_excess = rep.scaled_excess;
            return Ok(record);
        }
        Method::Lloyd => {
            let t = ConstraintIndex::new(n).map_err(fail(EXIT_USAGE))?;
            let out = solve_fixed_constraint(n as usize, t, solver).map_err(fail(EXIT_USAGE))?;
            if !out.converged {
                return Err((
                    EXIT_NUMERICAL,
                    Error::InvalidConfig(format!(
                        "Lloyd iteration did not converge to tol {} within {} sweeps",
                        solver.tol, out.iterations
                    )),
                ));
            }
            (out.quantizer, out.distortion)
        }
        Method::BruteForce => {
            let mut cfg = OracleConfig::for_n(n).map_err(fail(EXIT_USAGE))?;
            if let Some(step) = oracle_step {
                cfg.grid_step = step;
            }
            let out = brute_force(n, &cfg).map_err(fail(EXIT_USAGE))?;
            (out.quantizer, out.distortion)
        }
    };
    OutputRecord::new(method, &q, d).map_err(fail(EXIT_NUMERICAL))
}

fn cmd_solve(a: &SolveArgs) -> std::result::Result<Output, Failure> {
    let mut solver = SolverConfig::default();
    if let Some(tol) = a.tol {
        solver.tol = tol;
    }
    if let Some(max_iter) = a.max_iter {
        solver.max_iter = max_iter;
    }
    let record = solve(a.n, a.method, &solver, a.grid_step).map_err(|(code, e)| Failure {
        code,
        message: e.to_string(),
    })?;
    let text = match a.format {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    };
    Ok(Output::ok(text, a.out.clone()))
}

/// Per-`n` deviations reported by `verify`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub n: u32,
    pub lloyd_feet_dev: f64,
    pub lloyd_distortion_dev: f64,
    pub oracle: Option<OracleRow>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub indices_ok: bool,
    pub feet_dev: f64,
    pub distortion_dev: f64,
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn verify_one(
    n: u32,
    with_oracle: bool,
    reference: &(dyn Fn(u32) -> Result<ClosedFormReport> + Sync),
) -> VerifyRow {
    let mut failures = Vec::new();
    let rep = match reference(n) {
        Ok(r) => r,
        Err(e) => {
            return VerifyRow {
                n,
                lloyd_feet_dev: f64::NAN,
                lloyd_distortion_dev: f64::NAN,
                oracle: None,
                failures: vec![format!("n={n}: reference unavailable: {e}")],
            }
        }
    };
    let ref_feet = rep.points.feet();
    let t = ConstraintIndex::new(n).expect("n >= 1");
    let (feet_dev, dist_dev) = match solve_fixed_constraint(n as usize, t, &SolverConfig::default())
    {
        Ok(out) => {
            if !out.converged {
                failures.push(format!("n={n}: Lloyd did not converge"));
            }
            (
                max_dev(&out.quantizer.feet(), &ref_feet),
                (out.distortion - rep.vn).abs(),
            )
        }
        Err(e) => {
            failures.push(format!("n={n}: Lloyd failed: {e}"));
            (f64::NAN, f64::NAN)
        }
    };
    if !(feet_dev <= FEET_TOL) {
        failures.push(format!(
            "n={n}: Lloyd feet deviate by {feet_dev} > {FEET_TOL}"
        ));
    }
    if !(dist_dev <= DISTORTION_TOL) {
        failures.push(format!(
            "n={n}: Lloyd distortion deviates by {dist_dev} > {DISTORTION_TOL}"
        ));
    }
    let oracle = with_oracle.then(|| {
        let cfg = OracleConfig::for_n(n).expect("n >= 1");
        match brute_force(n, &cfg) {
            Ok(out) => {
                let indices_ok = out.quantizer.points().iter().all(|p| p.index() == t);
                let feet_dev = max_dev(&out.quantizer.feet(), &ref_feet);
                let distortion_dev = out.distortion - rep.vn;
                if !indices_ok {
                    failures.push(format!("n={n}: oracle left S_{n}"));
                }
                if !(feet_dev <= 2.0 * cfg.grid_step) {
                    failures.push(format!("n={n}: oracle feet deviate by {feet_dev}"));
                }
                if !(distortion_dev >= -DISTORTION_TOL) {
                    failures.push(format!(
                        "n={n}: oracle beats reference by {}",
                        -distortion_dev
                    ));
                }
                OracleRow {
                    indices_ok,
                    feet_dev,
                    distortion_dev,
                }
            }
            Err(e) => {
                failures.push(format!("n={n}: oracle failed: {e}"));
                OracleRow {
                    indices_ok: false,
                    feet_dev: f64::NAN,
                    distortion_dev: f64::NAN,
                }
            }
        }
    });
    VerifyRow {
        n,
        lloyd_feet_dev: feet_dev,
        lloyd_distortion_dev: dist_dev,
        oracle,
        failures,
    }
}

/// Checks Lloyd (and brute force for `n <= oracle_n_max`) against
/// `reference` for every `n <= n_max`. Rows are in ascending `n`.
pub fn verify(
    n_max: u32,
    oracle_n_max: u32,
    reference: &(dyn Fn(u32) -> Result<ClosedFormReport> + Sync),
) -> Vec<VerifyRow> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| verify_one(n, n <= oracle_n_max, reference))
        .collect()
}

pub fn render_verify(rows: &[VerifyRow]) -> String {
    let mut s = String::from(
        "n,lloyd_feet_dev,lloyd_distortion_dev,oracle_index_ok,oracle_feet_dev,oracle_distortion_dev,status\n",
    );
    for r in rows {
        let (ok, fd, dd) = match &r.oracle {
            Some(o) => (
                o.indices_ok.to_string(),
                format!("{:e}", o.feet_dev),
                format!("{:e}", o.distortion_dev),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        let status = if r.failures.is_empty() { "ok" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{},{:e},{:e},{ok},{fd},{dd},{status}",
            r.n, r.lloyd_feet_dev, r.lloyd_distortion_dev
        );
    }
    s
}

fn cmd_verify(
    a: &VerifyArgs,
    reference: &(dyn Fn(u32) -> Result<ClosedFormReport> + Sync),
) -> std::result::Result<Output, Failure> {
    let rows = verify(a.n_max, a.oracle_n_max, reference);
    let failures: Vec<&String> = rows.iter().flat_map(|r| &r.failures).collect();
    let mut out = Output::ok(render_verify(&rows), None);
    if !failures.is_empty() {
        out.code = EXIT_VERIFY_FAILED;
        for f in failures {
            let _ = writeln!(out.diagnostics, "{f}");
        }
    }
    Ok(out)
}

/// Verifies with a caller-supplied reference, returning the exit code.
pub fn run_verify_with(
    n_max: u32,
    oracle_n_max: u32,
    reference: &(dyn Fn(u32) -> Result<ClosedFormReport> + Sync),
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let args = VerifyArgs {
        n_max,
        oracle_n_max,
    };
    match cmd_verify(&args, reference) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            let _ = err.write_all(o.diagnostics.as_bytes());
            o.code
        }
        Err(f) => f.code,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub n: u32,
    pub v_n: f64,
    pub excess: f64,
    pub scaled_excess: f64,
    /// Absent at `n = 1`, where `log n = 0`.
    pub dim_direct: Option<f64>,
}

pub fn curve_sizes(n_max: u32, geometric: bool) -> Vec<u32> {
    if !geometric {
        return (1..=n_max).collect();
    }
    let mut ns: Vec<u32> = std::iter::successors(Some(1u32), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect();
    if ns.last() != Some(&n_max) {
        ns.push(n_max);
    }
    ns
}

pub fn curve_rows(ns: &[u32]) -> Result<Vec<CurveRow>> {
    ns.par_iter()
        .map(|&n| {
            Ok(CurveRow {
                n,
                v_n: vn(n)?,
                excess: excess(n)?,
                scaled_excess: coefficient_estimate(n)?,
                dim_direct: dimension_direct(n).ok(),
            })
        })
        .collect()
}

fn cmd_curve(a: &CurveArgs) -> std::result::Result<Output, Failure> {
    let ns = curve_sizes(a.n_max, a.spacing == Spacing::Geometric);
    let rows = curve_rows(&ns).map_err(numerical)?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("n,v_n,excess,scaled_excess,dim_direct\n");
            for r in &rows {
                let dim = r.dim_direct.map(|d| d.to_string()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{dim}",
                    r.n, r.v_n, r.excess, r.scaled_excess
                );
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
    };
    Ok(Output::ok(text, a.out.clone()))
}

#[derive(Debug, Serialize)]
struct DimensionRecord {
    n_min: u32,
    n_max: u32,
    samples: usize,
    slope: f64,
    intercept: f64,
    dimension: f64,
    residual: f64,
}

fn cmd_dimension(a: &DimensionArgs) -> std::result::Result<Output, Failure> {
    let est = dimension_regression(a.n_min, a.n_max, a.samples).map_err(usage)?;
    let rec = DimensionRecord {
        n_min: est.sample_range.0,
        n_max: est.sample_range.1,
        samples: a.samples,
        slope: est.slope,
        intercept: est.intercept,
        dimension: est.dimension,
        residual: est.residual,
    };
    let text =
        match a.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&rec).expect("record serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                format!(
            "n_min,n_max,samples,slope,intercept,dimension,residual\n{},{},{},{},{},{},{}\n",
            rec.n_min, rec.n_max, rec.samples, rec.slope, rec.intercept, rec.dimension, rec.residual
        )
            }
        };
    Ok(Output::ok(text, a.out.clone()))
}
