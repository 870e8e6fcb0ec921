//! Command-line front end: `coeffs`, `reconstruct` and `verify`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, 3 I/O.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{
    completeness_probe, fourier_gram, order_for_radius, residue_identity_check, scalar_product,
    unit_mass, GramReport,
};
use crate::catalog::{CatalogEntry, CatalogParams};
use crate::classify::{
    classify_sequence, convergence_radius_check_range, damped_peak, equivalence_check,
    ClassificationReport, FamilyKind, GrowthFamily, GrowthModel,
};
use crate::coeffs::{
    default_points, fourier_coefficients, from_taylor, to_taylor, FourierCoefficients,
    TaylorCoefficients,
};
use crate::error::Error;
use crate::function::{CatalogFunction, PeriodicFunction, SampleGrid};
use crate::hilbert::{
    inner_product_disk, inner_product_series, norm_disk, taylor_gram, DiskProductConfig,
};
use crate::inner::{ClosedForm, InnerAnalytic, PolarPoint};
use crate::io::{fmt_f64, to_json_string};
use crate::kernels::{
    boundary_partial_sum, contour_partial_sum, partial_sum, remainder, remainder_log_slope,
    write_sweep_csv, PartialSumReport,
};
use crate::series::{
    regulated_sums, rho_limit_pair, LimitOptions, RhoSchedule, DEFAULT_LIMIT_TOL, DEFAULT_SCHEDULE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "INNER_FOURIER_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "inner-fourier",
    version,
    about = "Fourier series through inner analytic functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fourier and Taylor coefficients of a catalog function or sampled data.
    Coeffs(CoeffsArgs),
    /// Regulated sums of a coefficient file on a grid of angles.
    Reconstruct(ReconstructArgs),
    /// Run a verification suite: ortho, complete, kernels, hilbert, classify.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    /// Catalog id: zero, const, cos_k, sin_k, square, sawtooth, triangle,
    /// poisson, log_abs_sin, delta, delta_derivative.
    #[arg(long = "fn", conflicts_with = "csv", required_unless_present = "csv")]
    function: Option<String>,
    /// CSV file with header `theta,value` on the uniform grid.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long = "K", default_value_t = 64)]
    k: usize,
    /// Quadrature points; defaults to max(4K, 256), or the CSV length.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Harmonic index for cos_k and sin_k.
    #[arg(long)]
    harmonic: Option<u32>,
    /// Value of the const entry.
    #[arg(long)]
    c: Option<f64>,
    /// Parameter of the poisson entry, |r| < 1.
    #[arg(long)]
    r: Option<f64>,
    /// Delta location in [-pi, pi); accepts forms such as `-pi/2`.
    #[arg(long, allow_hyphen_values = true, value_parser = angle_arg)]
    theta1: Option<f64>,
    /// Derivative order of delta_derivative.
    #[arg(long)]
    order: Option<u32>,
    /// Use closed-form coefficients instead of quadrature.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// JSON written by `coeffs`, or bare Fourier or Taylor coefficients.
    #[arg(long)]
    coeffs: PathBuf,
    /// `a:b:n` (n evenly spaced angles, both ends included) or a comma list;
    /// `pi` is accepted, as in `-pi/2`.
    #[arg(long, allow_hyphen_values = true, default_value = "-pi:pi:65")]
    theta: String,
    /// Fixed radius in [0, 1).
    #[arg(long, conflicts_with = "schedule")]
    rho: Option<f64>,
    /// Radius schedule `j1..j2`, radii 1 - 2^-j.
    #[arg(long)]
    schedule: Option<String>,
    /// Convergence tolerance on the last schedule step, or on the
    /// truncation bound at a fixed radius.
    #[arg(long, default_value_t = DEFAULT_LIMIT_TOL)]
    tol: f64,
    /// Emit one row per schedule radius.
    #[arg(long)]
    sweep: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name (also accepted as --suite).
    #[arg(value_name = "SUITE", required_unless_present = "suite_flag")]
    suite: Option<String>,
    #[arg(long = "suite", conflicts_with = "suite")]
    suite_flag: Option<String>,
    /// Harmonic count (ortho), Gram size (hilbert) or sequence order (classify).
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long = "M")]
    m: Option<usize>,
    /// Probe radius (complete).
    #[arg(long)]
    rho: Option<f64>,
    /// Disk radius (hilbert).
    #[arg(long)]
    rho0: Option<f64>,
    /// Growth family for classify: poly, polyexp, exp.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    /// Write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include full Gram matrices in the JSON report.
    #[arg(long)]
    matrix: bool,
    /// Write the contour partial sums of the kernels suite as CSV.
    #[arg(long)]
    sweep: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

/// Input-file problems are I/O failures; everything else is a usage error.
fn from_input(e: Error) -> CliError {
    match e {
        Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Parse(_) => {
            CliError::Io(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn with_path(path: &Path, e: Error) -> CliError {
    match from_input(e) {
        CliError::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.code();
    }
    let result = match cli.command {
        Command::Coeffs(a) => cmd_coeffs(&a).map(|_| EXIT_OK),
        Command::Reconstruct(a) => cmd_reconstruct(&a).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // A second initialisation in the same process (tests) is harmless.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Contents of a coefficient file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub source: String,
    pub parameters: BTreeMap<String, f64>,
    /// Quadrature points, absent for closed-form coefficients.
    #[serde(rename = "M")]
    pub points: Option<usize>,
    pub fourier: FourierCoefficients,
    pub taylor: TaylorCoefficients,
}

impl CoefficientFile {
    pub fn new(
        source: String,
        parameters: BTreeMap<String, f64>,
        points: Option<usize>,
        fc: FourierCoefficients,
    ) -> Self {
        let taylor = to_taylor(&fc);
        CoefficientFile {
            source,
            parameters,
            points,
            fourier: fc,
            taylor,
        }
    }

    /// Reads a coefficient file, or bare Fourier or Taylor coefficients.
    pub fn read(path: &Path) -> crate::error::Result<FourierCoefficients> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        if value.get("fourier").is_some() {
            let file: CoefficientFile = serde_json::from_value(value)?;
            return Ok(file.fourier);
        }
        if value.get("alpha0").is_some() {
            return Ok(serde_json::from_value(value)?);
        }
        if value.get("c_re").is_some() {
            let tc: TaylorCoefficients = serde_json::from_value(value)?;
            return from_taylor(&tc);
        }
        Err(Error::Parse(format!(
            "{} holds no recognised coefficients",
            path.display()
        )))
    }
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<(), CliError> {
    let file = if let Some(path) = &a.csv {
        let samples = SampleGrid::from_csv_path(path).map_err(|e| with_path(path, e))?;
        let points = samples.len();
        if let Some(m) = a.m {
            if m != points {
                return Err(CliError::Usage(format!(
                    "--M {m} disagrees with the {points} rows of {}",
                    path.display()
                )));
            }
        }
        let fc =
            fourier_coefficients(&PeriodicFunction::from(samples), a.k, points).map_err(usage)?;
        CoefficientFile::new(
            format!("csv:{}", path.display()),
            BTreeMap::new(),
            Some(points),
            fc,
        )
    } else {
        let id = a.function.as_deref().expect("clap enforces --fn or --csv");
        let params = CatalogParams {
            harmonic: a.harmonic,
            c: a.c,
            r: a.r,
            theta1: a.theta1,
            order: a.order,
        };
        let entry = CatalogEntry::parse(id, &params).map_err(|e| CliError::Usage(e.to_string()))?;
        let closed = a.exact || entry.is_distribution();
        let points = a.m.unwrap_or_else(|| default_points(a.k));
        let fc = entry.coefficients(a.k, points, closed).map_err(usage)?;
        let parameters = entry
            .parameters()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        CoefficientFile::new(
            entry.id().to_string(),
            parameters,
            (!closed).then_some(points),
            fc,
        )
    };
    emit(
        a.out.as_deref(),
        &to_json_string(&file).map_err(from_input)?,
    )
}

fn angle_arg(text: &str) -> std::result::Result<f64, String> {
    parse_angle(text).ok_or_else(|| format!("not an angle: {text}"))
}

/// Parses an angle such as `0.5`, `pi`, `-pi/2`, `3pi/4` or `2*pi`.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t = text.trim().replace('*', "");
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.as_str()),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (body, 1.0),
    };
    let factor = match num.strip_suffix("pi")? {
        "" => 1.0,
        f => f.parse::<f64>().ok()?,
    };
    let v = factor * PI / den;
    Some(if neg { -v } else { v })
}

/// `a:b:n` or a comma-separated list of angles.
pub fn parse_theta_grid(spec: &str) -> Option<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let (a, b) = (parse_angle(parts[0])?, parse_angle(parts[1])?);
        let n: usize = parts[2].trim().parse().ok()?;
        return match n {
            0 => None,
            1 => Some(vec![a]),
            _ => Some(
                (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect(),
            ),
        };
    }
    if parts.len() != 1 {
        return None;
    }
    spec.split(',').map(parse_angle).collect()
}

/// `j1..j2`.
pub fn parse_schedule(spec: &str, tol: f64) -> crate::error::Result<RhoSchedule> {
    let (a, b) = spec
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("schedule `{spec}` is not j1..j2")))?;
    let first = a
        .trim()
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad schedule start `{a}`")))?;
    let last = b
        .trim()
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad schedule end `{b}`")))?;
    RhoSchedule::geometric(first, last, tol)
}

fn cmd_reconstruct(a: &ReconstructArgs) -> Result<(), CliError> {
    let thetas = parse_theta_grid(&a.theta)
        .ok_or_else(|| CliError::Usage(format!("cannot parse theta grid `{}`", a.theta)))?;
    if !(a.tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    if let Some(rho) = a.rho {
        if !(0.0..1.0).contains(&rho) {
            return Err(CliError::Usage(format!(
                "--rho must lie in [0, 1), got {rho}"
            )));
        }
    }
    let fc = CoefficientFile::read(&a.coeffs).map_err(|e| with_path(&a.coeffs, e))?;

    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    wtr.write_record(["theta", "rho", "value", "conjugate", "converged"])
        .map_err(io)?;
    let mut row = |theta: f64, rho: f64, u: f64, v: f64, ok: bool| {
        wtr.write_record([
            fmt_f64(theta),
            fmt_f64(rho),
            fmt_f64(u),
            fmt_f64(v),
            ok.to_string(),
        ])
    };
    match a.rho {
        Some(rho) => {
            let bound = truncation_bound(&fc, rho);
            for &theta in &thetas {
                let (u, v) = regulated_sums(&fc, theta, rho).map_err(usage)?;
                row(theta, rho, u, v, bound <= a.tol).map_err(io)?;
            }
        }
        None => {
            let spec = a
                .schedule
                .clone()
                .unwrap_or_else(|| format!("{}..{}", DEFAULT_SCHEDULE.0, DEFAULT_SCHEDULE.1));
            let sched = parse_schedule(&spec, a.tol).map_err(|e| CliError::Usage(e.to_string()))?;
            for &theta in &thetas {
                let (u, v) = rho_limit_pair(&fc, theta, &sched, LimitOptions::default());
                if a.sweep {
                    for (i, &rho) in sched.rhos().iter().enumerate() {
                        row(theta, rho, u.history[i], v.history[i], u.converged).map_err(io)?;
                    }
                } else {
                    let rho = *sched.rhos().last().expect("schedules are non-empty");
                    row(theta, rho, u.value, v.value, u.converged).map_err(io)?;
                }
            }
        }
    }
    let bytes = wtr.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    emit(
        a.out.as_deref(),
        &String::from_utf8(bytes).expect("CSV of ASCII fields"),
    )
}

/// `max_k |c_k| rho^(K+1) / (1 - rho)`.
fn truncation_bound(fc: &FourierCoefficients, rho: f64) -> f64 {
    let max = to_taylor(fc)
        .coefficients()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    max * rho.powi(fc.order() as i32 + 1) / (1.0 - rho)
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, error: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            error,
            tol,
            pass: error <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(flatten)]
    pub artifacts: Artifacts,
}

/// Module reports gathered while a suite runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Artifacts {
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub gram: BTreeMap<String, GramReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub partial_sums: Vec<PartialSumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
}

impl Artifacts {
    fn add_gram(&mut self, name: impl Into<String>, g: &GramReport, matrix: bool) {
        self.gram
            .insert(name.into(), if matrix { g.clone() } else { g.summary() });
    }
}

/// Parameters shared by the verification suites; `None` picks the suite
/// default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteParams {
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub rho: Option<f64>,
    pub rho0: Option<f64>,
    pub family: Option<String>,
    pub p: Option<f64>,
    pub b: Option<f64>,
    pub seed: u64,
    /// Keep full Gram matrices in the artifacts.
    pub matrix: bool,
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let suite = a
        .suite
        .clone()
        .or_else(|| a.suite_flag.clone())
        .expect("clap enforces a suite");
    let params = SuiteParams {
        k: a.k,
        m: a.m,
        rho: a.rho,
        rho0: a.rho0,
        family: a.family.clone(),
        p: a.p,
        b: a.b,
        seed: a.seed,
        matrix: a.matrix,
    };
    let report = run_suite(&suite, &params).map_err(|e| match e {
        Error::Parse(_) | Error::Precondition(_) | Error::Domain(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Io(other.to_string()),
    })?;
    let mut text = String::new();
    for c in &report.checks {
        text.push_str(&format!(
            "{} {} error={} tol={}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            fmt_f64(c.error),
            fmt_f64(c.tol)
        ));
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        text.push_str(&format!(
            "suite {}: pass ({} checks)\n",
            report.suite,
            report.checks.len()
        ));
    } else {
        text.push_str(&format!(
            "suite {}: FAIL ({})\n",
            report.suite,
            failed.join(", ")
        ));
    }
    print!("{text}");
    if let Some(path) = &a.out {
        emit(Some(path), &to_json_string(&report).map_err(from_input)?)?;
    }
    if let Some(path) = &a.sweep {
        let file = std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        write_sweep_csv(file, &report.artifacts.partial_sums).map_err(from_input)?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

/// Runs a named suite and collects its checks.
pub fn run_suite(suite: &str, params: &SuiteParams) -> crate::error::Result<SuiteReport> {
    let mut artifacts = Artifacts::default();
    let a = &mut artifacts;
    let checks = match suite {
        "ortho" => suite_ortho(params, a)?,
        "complete" => suite_complete(params, a)?,
        "kernels" => suite_kernels(params, a)?,
        "hilbert" => suite_hilbert(params, a)?,
        "classify" => suite_classify(params, a)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown suite `{other}`; expected ortho, complete, kernels, hilbert or classify"
            )))
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: suite.to_string(),
        pass,
        checks,
        artifacts,
    })
}

fn cat(f: CatalogFunction) -> PeriodicFunction {
    PeriodicFunction::from(f)
}

fn suite_ortho(params: &SuiteParams, art: &mut Artifacts) -> crate::error::Result<Vec<Check>> {
    let k = params.k.unwrap_or(32);
    let m = params.m.unwrap_or(4 * k + 2);
    let gram = fourier_gram(k, m)?;
    art.add_gram("fourier", &gram, params.matrix);
    let mut checks = vec![
        Check::new(
            format!("gram.diag[K={k},M={m}]"),
            gram.max_diag_error,
            1e-12,
        ),
        Check::new(
            format!("gram.offdiag[K={k},M={m}]"),
            gram.max_offdiag_error,
            1e-12,
        ),
        Check::new("gram.symmetry", gram.max_asymmetry(), 1e-12),
    ];
    // Power-of-two grids hold every root with its antipode, so the rounded
    // roots cancel exactly and rho^-8 does not amplify roundoff.
    let res_points = m.max(64).next_power_of_two();
    let mut worst: f64 = 0.0;
    for p in -8..=8i64 {
        for &rho in &[0.25, 0.5, 1.0] {
            let want = if p == 0 { 1.0 } else { 0.0 };
            worst = worst.max((residue_identity_check(p, rho, res_points)? - want).norm());
        }
    }
    checks.push(Check::new("residue[p=-8..8]", worst, 1e-13));
    let one = cat(CatalogFunction::Const(1.0));
    checks.push(Check::new(
        "product.const",
        (scalar_product(&one, &one, m)? - 2.0 * PI).abs(),
        1e-12,
    ));
    let mut worst_cross: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for j in 1..=k.clamp(1, 8) as u32 {
        let (c, s) = (cat(CatalogFunction::Cos(j)), cat(CatalogFunction::Sin(j)));
        worst_cross = worst_cross.max(scalar_product(&c, &s, m)?.abs());
        worst_norm = worst_norm.max((scalar_product(&c, &c, m)? - PI).abs());
    }
    checks.push(Check::new("product.cos_sin", worst_cross, 1e-12));
    checks.push(Check::new("product.cos_cos", worst_norm, 1e-12));
    Ok(checks)
}

fn suite_complete(params: &SuiteParams, _art: &mut Artifacts) -> crate::error::Result<Vec<Check>> {
    let rho = params.rho.unwrap_or(0.9);
    let m = params.m.unwrap_or(4096);
    let k = params.k.unwrap_or_else(|| order_for_radius(rho, 1e-18));
    let theta1 = 0.7;
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for j in 1..=8u32 {
        let got = completeness_probe(&cat(CatalogFunction::Cos(j)), theta1, rho, k, m)?;
        worst = worst.max((got - rho.powi(j as i32) * (j as f64 * theta1).cos()).abs());
    }
    checks.push(Check::new(
        format!("eigenrelation[rho={rho},K={k}]"),
        worst,
        1e-10,
    ));
    // Harmonic K+1 aliases onto a kept harmonic unless M > 2K + 1.
    let above = (k + 1) as u32;
    let fine = m.max(2 * k + 2);
    let zero_cos =
        completeness_probe(&cat(CatalogFunction::Cos(above)), theta1, rho, k, fine)?.abs();
    let zero_sin =
        completeness_probe(&cat(CatalogFunction::Sin(above)), theta1, rho, k, fine)?.abs();
    checks.push(Check::new(
        "zero_coefficient_probe",
        zero_cos.max(zero_sin),
        1e-10,
    ));
    let mut mass: f64 = 0.0;
    for &r in &[0.0, 0.5, rho] {
        mass = mass.max((unit_mass(theta1, r, k, m)? - 1.0).abs());
    }
    checks.push(Check::new("unit_mass", mass, 1e-12));
    // Sifting near the boundary.
    let (near, big_k, big_m) = (0.999, 10_000, 16_384);
    let cos_probe = completeness_probe(&cat(CatalogFunction::Cos(1)), 0.0, near, big_k, big_m)?;
    checks.push(Check::new(
        "sifting.cos[rho=0.999]",
        (cos_probe - near).abs(),
        1e-3,
    ));
    let sign_probe =
        completeness_probe(&cat(CatalogFunction::Square), PI / 2.0, near, big_k, big_m)?;
    checks.push(Check::new(
        "sifting.sign[rho=0.999]",
        (sign_probe - 1.0).abs(),
        0.02,
    ));
    Ok(checks)
}

fn suite_kernels(params: &SuiteParams, art: &mut Artifacts) -> crate::error::Result<Vec<Check>> {
    let m = params.m.unwrap_or(4096);
    let pt = PolarPoint::new;
    let mut checks = Vec::new();
    let z2 = InnerAnalytic::Taylor(TaylorCoefficients::monomial(2));
    let inside = contour_partial_sum(&z2, pt(0.3, 0.0)?, 3, 0.8, m)?;
    art.partial_sums.push(inside);
    checks.push(Check::new("contour.poly.inside", inside.discrepancy, 1e-10));
    let outside = contour_partial_sum(&z2, pt(0.9, 0.0)?, 3, 0.4, m)?;
    art.partial_sums.push(outside);
    checks.push(Check::new(
        "contour.poly.outside",
        outside.discrepancy,
        1e-10,
    ));
    checks.push(Check::new(
        "contour.poly.outside.first_term",
        outside.first_term.norm(),
        1e-10,
    ));

    let cubic = TaylorCoefficients::new(vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(-1.0, 0.25),
        Complex64::new(0.3, -0.7),
        Complex64::new(1.2, 0.4),
    ])?;
    let w = InnerAnalytic::Taylor(cubic.clone());
    let mut first: f64 = 0.0;
    let mut rem: f64 = 0.0;
    for n in 4..=8 {
        for &(r, t) in &[(0.2, 0.4), (0.6, -2.0), (0.75, 3.0)] {
            let z = pt(r, t)?;
            let rep = contour_partial_sum(&w, z, n, 0.9, m)?;
            first = first.max((rep.first_term - cubic.horner(z.z())).norm());
            rem = rem.max(remainder(&w, z, n, 0.9, m)?.norm());
        }
    }
    checks.push(Check::new("cauchy.poly.first_term", first, 1e-11));
    checks.push(Check::new("cauchy.poly.remainder", rem, 1e-11));

    let delta = InnerAnalytic::Delta { theta1: -PI };
    let d_in = contour_partial_sum(&delta, pt(0.5, 0.0)?, 8, 0.9, m)?;
    art.partial_sums.push(d_in);
    checks.push(Check::new("contour.delta.inside", d_in.discrepancy, 1e-10));
    let d_out = contour_partial_sum(&delta, pt(0.9, 0.3)?, 8, 0.5, m)?;
    art.partial_sums.push(d_out);
    checks.push(Check::new(
        "contour.delta.outside",
        d_out.discrepancy,
        1e-10,
    ));

    let geo = InnerAnalytic::Closed(ClosedForm::Geometric);
    let r4 = remainder(&geo, pt(0.5, 0.0)?, 4, 0.9, m)?;
    checks.push(Check::new(
        "remainder.geometric",
        (r4 - Complex64::new(0.125, 0.0)).norm(),
        1e-10,
    ));
    let slope = remainder_log_slope(&geo, pt(0.5, 0.0)?, &[4, 8, 12, 16, 20, 24], 0.9, m)?;
    checks.push(Check::new(
        "remainder.slope",
        (slope / 0.5f64.ln() - 1.0).abs(),
        0.02,
    ));

    let c0 = InnerAnalytic::Taylor(TaylorCoefficients::new(vec![Complex64::new(0.7, -0.1)])?);
    let mut worst_c: f64 = 0.0;
    for n in 1..=4 {
        worst_c = worst_c
            .max((boundary_partial_sum(&c0, 0.3, n, 0.9, m)? - Complex64::new(0.7, -0.1)).norm());
    }
    checks.push(Check::new("boundary.const", worst_c, 1e-8));
    let z1 = InnerAnalytic::Taylor(TaylorCoefficients::monomial(1));
    let s2 = boundary_partial_sum(&z1, 0.0, 2, 0.99, 8192)?;
    checks.push(Check::new("boundary.identity", (s2 - 1.0).norm(), 1e-8));

    let square = InnerAnalytic::Closed(ClosedForm::SquareWave);
    let sq_tc = square
        .taylor_coefficients(63)
        .expect("closed form has a series");
    let direct = partial_sum(&sq_tc, pt(1.0, PI / 2.0)?, 64)?;
    let bsum = boundary_partial_sum(&square, PI / 2.0, 64, 0.999, 1 << 16)?;
    checks.push(Check::new("boundary.square", (bsum - direct).norm(), 1e-3));

    let poisson = InnerAnalytic::Closed(ClosedForm::Poisson { r: 0.5 });
    let p_tc = poisson
        .taylor_coefficients(15)
        .expect("closed form has a series");
    let p_direct = partial_sum(&p_tc, pt(1.0, 1.0)?, 16)?;
    let mut worst_p: f64 = 0.0;
    for &r1 in &[0.9, 0.99, 0.999] {
        worst_p =
            worst_p.max((boundary_partial_sum(&poisson, 1.0, 16, r1, 1 << 16)? - p_direct).norm());
    }
    checks.push(Check::new(
        "boundary.poisson[rho1=0.9,0.99,0.999]",
        worst_p,
        1e-10,
    ));
    Ok(checks)
}

fn random_taylor(rng: &mut ChaCha8Rng, order: usize) -> TaylorCoefficients {
    let c = (0..=order)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    TaylorCoefficients::new(c).expect("finite draws")
}

fn suite_hilbert(params: &SuiteParams, art: &mut Artifacts) -> crate::error::Result<Vec<Check>> {
    let k = params.k.unwrap_or(16);
    let rho0 = params.rho0.unwrap_or(0.5);
    let m = params.m.unwrap_or((4 * k + 2).max(64));
    let mut checks = Vec::new();
    let gram = taylor_gram(k, &DiskProductConfig::new(rho0, m)?)?;
    art.add_gram(format!("taylor[rho0={rho0}]"), &gram, params.matrix);
    checks.push(Check::new(
        format!("taylor_gram.diag[rho0={rho0}]"),
        gram.max_diag_error,
        1e-12,
    ));
    checks.push(Check::new(
        format!("taylor_gram.offdiag[rho0={rho0}]"),
        gram.max_offdiag_error,
        1e-12,
    ));
    let unit = taylor_gram(k, &DiskProductConfig::new(1.0, m)?)?;
    art.add_gram("taylor[rho0=1]", &unit, params.matrix);
    checks.push(Check::new(
        "taylor_gram.identity",
        unit.max_diag_error.max(unit.max_offdiag_error),
        1e-12,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut agree: f64 = 0.0;
    let mut herm: f64 = 0.0;
    for _ in 0..100 {
        let (k1, k2) = (rng.gen_range(0..=256), rng.gen_range(0..=256));
        let r0 = rng.gen_range(0.1..=0.9);
        let cfg = DiskProductConfig::new(r0, 1024)?;
        let (t1, t2) = (random_taylor(&mut rng, k1), random_taylor(&mut rng, k2));
        let (w1, w2) = (
            InnerAnalytic::Taylor(t1.clone()),
            InnerAnalytic::Taylor(t2.clone()),
        );
        let disk = inner_product_disk(&w1, &w2, &cfg)?;
        let series = inner_product_series(&t1, &t2, r0)?;
        agree = agree.max((disk - series.value).norm());
        herm = herm.max((disk - inner_product_disk(&w2, &w1, &cfg)?.conj()).norm());
    }
    checks.push(Check::new("contour_vs_series[100 pairs]", agree, 1e-11));
    checks.push(Check::new("hermitian_symmetry", herm, 1e-13));

    let mut positivity_failures = 0.0;
    for _ in 0..20 {
        let order = rng.gen_range(0..=32);
        let w = InnerAnalytic::Taylor(random_taylor(&mut rng, order));
        for &r0 in &[0.3, 0.7, 1.0] {
            if norm_disk(&w, &DiskProductConfig::new(r0, 256)?)? <= 0.0 {
                positivity_failures += 1.0;
            }
        }
    }
    checks.push(Check::new("positivity[failures]", positivity_failures, 0.0));
    let zero = InnerAnalytic::Taylor(TaylorCoefficients::zeros(4));
    checks.push(Check::new(
        "norm.zero",
        norm_disk(&zero, &DiskProductConfig::new(0.7, 64)?)?,
        0.0,
    ));

    let delta = to_taylor(&crate::distributions::delta_coefficients(
        &crate::distributions::DeltaSpec::new(0.3, 0)?,
        1024,
    )?);
    let flagged = inner_product_series(&delta, &delta, 1.0)?.divergent;
    checks.push(Check::new(
        "series.delta_divergent_flag",
        if flagged { 0.0 } else { 1.0 },
        0.0,
    ));
    Ok(checks)
}

/// The 4 x 4 grid of powers and bases used by the classify suite.
pub const GRID_POWERS: [f64; 4] = [0.0, 1.0, 2.0, 5.0];
pub const GRID_BASES: [f64; 4] = [0.9, 1.0, 1.01, 1.1];

fn suite_classify(params: &SuiteParams, art: &mut Artifacts) -> crate::error::Result<Vec<Check>> {
    let order = params.k.unwrap_or(4096);
    let window = GrowthModel::with_window(64.min(order / 4).max(1), order)?;
    if let Some(name) = &params.family {
        let kind: FamilyKind = name.parse()?;
        let family = kind.family(params.p.unwrap_or(1.0), params.b.unwrap_or(1.0))?;
        let report = classify_sequence(&family.generate(order)?, &window)?;
        art.classification = Some(report);
        println!(
            "{family}: bounded={} fitted_rate={} fitted_power={}",
            report.bounded,
            fmt_f64(report.fitted_rate),
            fmt_f64(report.fitted_power)
        );
        let truth = family
            .is_bounded()
            .expect("generated families have ground truth");
        return Ok(vec![Check::new(
            format!("classify.{family}[bounded={}]", report.bounded),
            if report.bounded == truth { 0.0 } else { 1.0 },
            0.0,
        )]);
    }

    let mut checks = Vec::new();
    let mut errors = 0.0;
    let mut echo_failures = 0.0;
    for &p in &GRID_POWERS {
        for &b in &GRID_BASES {
            let family = GrowthFamily::poly_exponential(p, b)?;
            let mags = family.magnitudes(order);
            let report = classify_sequence(mags.as_slice(), &window)?;
            if Some(report.bounded) != family.is_bounded() {
                errors += 1.0;
            }
            if report.bounded {
                let (lo, hi) = window.window.expect("explicit window");
                for &c in &[0.1, 0.01] {
                    for &q in &[1.0, 2.0] {
                        let peak = damped_peak(&mags, q, c, lo, hi)?;
                        if peak.argmax >= hi || !peak.decreasing_after {
                            echo_failures += 1.0;
                        }
                    }
                }
            }
        }
    }
    checks.push(Check::new("family_grid[errors]", errors, 0.0));
    checks.push(Check::new("damped_peak[failures]", echo_failures, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut disagreements = 0.0;
    for _ in 0..1000 {
        let fc = random_family_fourier(&mut rng, order)?;
        if !equivalence_check(&fc, &GrowthModel::default())?.agree {
            disagreements += 1.0;
        }
    }
    checks.push(Check::new("equivalence[1000 draws]", disagreements, 0.0));

    let quad = GrowthFamily::polynomial(2.0).generate(400)?;
    let tails = convergence_radius_check_range(&quad, &[0.9], 50, 200)?;
    checks.push(Check::new(
        "tail_rate[k^2,rho=0.9]",
        (tails[0].tail_rate - 0.9).abs(),
        0.05,
    ));
    Ok(checks)
}

/// Fourier coefficients with `|c_k| = A k^p b^k` for a random grid cell,
/// random scale `A` and random phases.
pub fn random_family_fourier(
    rng: &mut ChaCha8Rng,
    order: usize,
) -> crate::error::Result<FourierCoefficients> {
    let p = GRID_POWERS[rng.gen_range(0..GRID_POWERS.len())];
    let b = GRID_BASES[rng.gen_range(0..GRID_BASES.len())];
    let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
    let mags = GrowthFamily::poly_exponential(p, b)?.magnitudes(order);
    let (alpha, beta) = mags[1..]
        .iter()
        .map(|m| {
            let phase: f64 = rng.gen_range(-PI..PI);
            (scale * m * phase.cos(), scale * m * phase.sin())
        })
        .unzip();
    FourierCoefficients::new(scale * mags[0], alpha, beta)
}
