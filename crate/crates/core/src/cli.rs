//! Command-line front end: flag parsing, dispatch and JSON/CSV reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input or
//! evaluation errors (including usage errors).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::curvature::{hsc_extrema_at_jet, Direction, ExtremaOptions, HscEvaluator, HscExtremaReport};
use crate::error::{Error, Result};
use crate::field::MetricField;
use crate::metric_spec::parse_metric_spec;
use crate::point::{parse_complex_list, ChartPoint};
use crate::sampling::sample_points;
use crate::selftest::{run_selftest, PropertyResult};
use crate::wu::{decompose, wu_verify, GlobalBound, WuOptions, WuPoint, WuSample, SLACK_TOL};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "hermcurv";

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(name = "hermcurv", version, about = "Chern curvature and holomorphic sectional curvature of Hermitian metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Include wall time in the report (makes it non-deterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Holomorphic sectional curvature at points in one direction.
    Hsc(HscArgs),
    /// Minimum and maximum of the holomorphic sectional curvature over directions.
    Extrema(ExtremaArgs),
    /// Check the curvature of g + h against R_g + R_h - σ*q at points.
    DecomposeCheck(PairArgs),
    /// Check the curvature bound for g + h at points and directions.
    WuVerify(WuArgs),
    /// Curvature extrema over a grid on a complex line.
    Grid(GridArgs),
    /// Run the built-in property suites.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct HscArgs {
    /// Metric spec, inline or a file path.
    #[arg(long)]
    pub metric: String,
    /// Point as comma-separated complex numbers, e.g. "0.1+0.2i,0.3-0.1i". Repeatable.
    #[arg(long = "point", required = true, value_parser = parse_point, allow_hyphen_values = true)]
    pub points: Vec<ChartPoint>,
    /// Direction as comma-separated complex numbers.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub dir: Direction,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ExtremaArgs {
    #[arg(long)]
    pub metric: String,
    #[arg(long = "point", required = true, value_parser = parse_point, allow_hyphen_values = true)]
    pub points: Vec<ChartPoint>,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    pub restarts: u32,
    /// Gradient-norm tolerance.
    #[arg(long, default_value_t = 1e-8, value_parser = parse_positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PointSelection {
    /// Explicit point. Repeatable.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true, conflicts_with = "points")]
    pub point: Vec<ChartPoint>,
    /// Number of seeded random points (default 10).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub points: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PairArgs {
    #[arg(long)]
    pub metric_g: String,
    #[arg(long)]
    pub metric_h: String,
    #[command(flatten)]
    pub at: PointSelection,
    /// Residual threshold; defaults to 1e-8 for exact jets and 1e-4 otherwise.
    #[arg(long, value_parser = parse_positive)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct WuArgs {
    #[arg(long)]
    pub metric_g: String,
    #[arg(long)]
    pub metric_h: String,
    #[command(flatten)]
    pub at: PointSelection,
    /// Directions per point.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    pub restarts: u32,
    /// Include every sampled direction in the report.
    #[arg(long)]
    pub all_samples: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct GridArgs {
    #[arg(long)]
    pub metric: String,
    /// Cells per side.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(2..))]
    pub resolution: u32,
    /// Parameter box "s0,s1,t0,t1" for z = base + (s + i t)·line.
    #[arg(long, default_value = "-0.9,0.9,-0.9,0.9", value_parser = parse_region, allow_hyphen_values = true)]
    pub region: Region,
    /// Base point of the complex line (default: origin).
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub base: Option<ChartPoint>,
    /// Direction of the complex line (default: first coordinate axis).
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub line: Option<Direction>,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub restarts: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub s: (f64, f64),
    pub t: (f64, f64),
}

fn parse_point(text: &str) -> std::result::Result<ChartPoint, String> {
    let coords = parse_complex_list(text)?;
    ChartPoint::new(coords).map_err(|e| e.to_string())
}

fn parse_direction(text: &str) -> std::result::Result<Direction, String> {
    let coords = parse_complex_list(text)?;
    Direction::new(coords).map_err(|e| e.to_string())
}

fn parse_positive(text: &str) -> std::result::Result<f64, String> {
    match text.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{text}`")),
    }
}

fn parse_region(text: &str) -> std::result::Result<Region, String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number `{}` in region", p.trim())))
        .collect::<std::result::Result<_, _>>()?;
    match parts.as_slice() {
        &[s0, s1, t0, t1] if parts.iter().all(|v| v.is_finite()) && s0 < s1 && t0 < t1 => {
            Ok(Region { s: (s0, s1), t: (t0, t1) })
        }
        _ => Err("region must be \"s0,s1,t0,t1\" with s0 < s1 and t0 < t1".into()),
    }
}

/// Parses command-line arguments, without the program name.
pub fn parse_cli<I, S>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(std::iter::once(std::ffi::OsString::from(TOOL)).chain(args.into_iter().map(Into::into)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest distance from failing over all checks.
    pub worst_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HscItem {
    pub point: ChartPoint,
    pub direction: Direction,
    pub hsc: f64,
    /// `|ξ|²` in the metric.
    pub norm_sqr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremaItem {
    pub point: ChartPoint,
    #[serde(flatten)]
    pub extrema: HscExtremaReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeItem {
    pub point: ChartPoint,
    pub residual: f64,
    /// Largest component of the σ*q term.
    pub correction: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WuResult {
    pub points: Vec<WuPoint>,
    pub worst_slack_chain: f64,
    pub worst_slack_mixing: Option<f64>,
    pub worst_slack_pointwise_k: Option<f64>,
    pub chain_pass: bool,
    pub global: Option<GlobalBound>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<WuSample>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub coords: Vec<f64>,
    pub h_min: f64,
    pub h_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Results {
    Hsc(Vec<HscItem>),
    Extrema(Vec<ExtremaItem>),
    Decompose(Vec<DecomposeItem>),
    Wu(Box<WuResult>),
    Grid(Vec<GridRow>),
    Selftest(Vec<PropertyResult>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub results: Option<Results>,
    pub summary: Summary,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonFinite(_) => "non_finite",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotPositiveDefinite { .. } => "not_positive_definite",
        Error::Parse(_) => "parse",
        Error::UnknownBuiltin { .. } => "unknown_builtin",
        Error::InvalidParameter { .. } => "invalid_parameter",
        Error::OutsideDomain { .. } => "outside_domain",
        Error::DegenerateMetric { .. } => "degenerate_metric",
        Error::ZeroDirection => "zero_direction",
        Error::RankMismatch { .. } => "rank_mismatch",
        Error::InconsistentJet { .. } => "inconsistent_jet",
        Error::Domain(_) => "domain",
        Error::RetryBudget(_) => "retry_budget",
    }
}

/// Reads a metric spec from a file if `text` names one, else parses it inline.
pub fn load_metric(text: &str) -> Result<MetricField> {
    let path = Path::new(text);
    if !text.contains(':') || path.is_file() {
        if let Ok(contents) = std::fs::read_to_string(path) {
            return parse_metric_spec(&contents);
        }
        if !text.contains(':') {
            return Err(Error::InvalidParameter {
                name: "metric".into(),
                reason: format!("`{text}` is neither a readable file nor an inline spec"),
            });
        }
    }
    parse_metric_spec(text)
}

struct Computed {
    results: Results,
    checks: Vec<f64>,
    /// CSV body for grid output.
    csv: Option<String>,
}

fn points_for(sel: &PointSelection, field: &MetricField) -> Result<Vec<ChartPoint>> {
    if !sel.point.is_empty() {
        return Ok(sel.point.clone());
    }
    sample_points(field, sel.points.unwrap_or(10) as usize, sel.seed)
}

fn run_hsc(a: &HscArgs) -> Result<Computed> {
    let field = load_metric(&a.metric)?;
    let mut items = Vec::new();
    for p in &a.points {
        let jet = field.evaluate_jet(p)?;
        let eval = HscEvaluator::new(&jet)?;
        items.push(HscItem {
            point: p.clone(),
            direction: a.dir.clone(),
            hsc: eval.eval(a.dir.components())?,
            norm_sqr: jet.value().norm_sqr(a.dir.components()),
        });
    }
    Ok(Computed { results: Results::Hsc(items), checks: Vec::new(), csv: None })
}

fn run_extrema(a: &ExtremaArgs) -> Result<Computed> {
    let field = load_metric(&a.metric)?;
    let opts = ExtremaOptions { restarts: a.restarts as usize, tol: a.tol, seed: a.seed, ..Default::default() };
    let mut items = Vec::new();
    for p in &a.points {
        items.push(ExtremaItem { point: p.clone(), extrema: hsc_extrema_at_jet(&field.evaluate_jet(p)?, &opts)? });
    }
    Ok(Computed { results: Results::Extrema(items), checks: Vec::new(), csv: None })
}

fn load_pair(g: &str, h: &str) -> Result<(MetricField, MetricField, MetricField)> {
    let g = load_metric(g)?;
    let h = load_metric(h)?;
    let sum = MetricField::sum(g.clone(), h.clone())?;
    Ok((g, h, sum))
}

fn run_decompose(a: &PairArgs) -> Result<Computed> {
    let (g, h, sum) = load_pair(&a.metric_g, &a.metric_h)?;
    let tol = a.tol.unwrap_or(if g.has_exact_jets() && h.has_exact_jets() { 1e-8 } else { 1e-4 });
    let mut items = Vec::new();
    let mut checks = Vec::new();
    for p in points_for(&a.at, &sum)? {
        let rep = decompose(&g.evaluate_jet(&p)?, &h.evaluate_jet(&p)?)?;
        checks.push(tol - rep.residual);
        items.push(DecomposeItem {
            point: p,
            residual: rep.residual,
            correction: rep.correction.max_abs(),
            tolerance: tol,
            passed: rep.residual <= tol,
        });
    }
    Ok(Computed { results: Results::Decompose(items), checks, csv: None })
}

fn run_wu(a: &WuArgs) -> Result<Computed> {
    let (g, h, sum) = load_pair(&a.metric_g, &a.metric_h)?;
    let pts = points_for(&a.at, &sum)?;
    let opts = WuOptions {
        samples: a.samples as usize,
        seed: a.at.seed,
        extrema: ExtremaOptions { restarts: a.restarts as usize, seed: a.at.seed, ..Default::default() },
    };
    let rep = wu_verify(&g, &h, &pts, &opts)?;
    let mut checks = vec![rep.worst_slack_chain + SLACK_TOL];
    checks.extend(rep.worst_slack_mixing.map(|w| w + SLACK_TOL));
    checks.extend(rep.worst_slack_pointwise_k.map(|w| w + SLACK_TOL));
    checks.extend(rep.global.as_ref().map(|g| g.worst_slack + SLACK_TOL));
    let result = WuResult {
        points: rep.points,
        worst_slack_chain: rep.worst_slack_chain,
        worst_slack_mixing: rep.worst_slack_mixing,
        worst_slack_pointwise_k: rep.worst_slack_pointwise_k,
        chain_pass: rep.chain_pass,
        global: rep.global,
        pass: rep.pass,
        samples: a.all_samples.then_some(rep.samples),
    };
    Ok(Computed { results: Results::Wu(Box::new(result)), checks, csv: None })
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        "nan".into()
    }
}

/// Points of the grid, row-major in `t` then `s`.
pub fn grid_points(base: &[C64], line: &[C64], region: Region, resolution: usize) -> Vec<Vec<C64>> {
    let lerp = |(a, b): (f64, f64), i: usize| a + (b - a) * i as f64 / (resolution - 1) as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            let w = C64::new(lerp(region.s, i), lerp(region.t, j));
            out.push(base.iter().zip(line).map(|(b, l)| b + w * l).collect());
        }
    }
    out
}

fn grid_cell(field: &MetricField, z: &[C64], opts: &ExtremaOptions) -> Result<(f64, f64)> {
    let jet = field.evaluate_jet(&ChartPoint::new(z.to_vec())?)?;
    if field.n() == 1 {
        let h = HscEvaluator::new(&jet)?.eval(&[C64::new(1.0, 0.0)])?;
        return Ok((h, h));
    }
    let r = hsc_extrema_at_jet(&jet, opts)?;
    Ok((r.min, r.max))
}

fn run_grid(a: &GridArgs) -> Result<Computed> {
    let field = load_metric(&a.metric)?;
    let n = field.n();
    let base = a.base.clone().unwrap_or_else(|| ChartPoint::origin(n));
    let line = match &a.line {
        Some(d) => d.clone(),
        None => Direction::new((0..n).map(|k| C64::new((k == 0) as u8 as f64, 0.0)).collect())?,
    };
    for len in [base.n(), line.n()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let opts = ExtremaOptions { restarts: a.restarts as usize, seed: a.seed, ..Default::default() };
    let pts = grid_points(base.coords(), line.components(), a.region, a.resolution as usize);
    let cell = |z: &Vec<C64>| grid_cell(&field, z, &opts);
    #[cfg(feature = "parallel")]
    let values: Vec<Result<(f64, f64)>> = {
        use rayon::prelude::*;
        pts.par_iter().map(cell).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Result<(f64, f64)>> = pts.iter().map(cell).collect();

    let mut rows = Vec::with_capacity(pts.len());
    let mut first_error = None;
    for (z, v) in pts.iter().zip(values) {
        let (h_min, h_max) = match v {
            Ok(v) => v,
            Err(e @ (Error::OutsideDomain { .. } | Error::DegenerateMetric { .. })) => {
                first_error.get_or_insert(e);
                (f64::NAN, f64::NAN)
            }
            Err(e) => return Err(e),
        };
        rows.push(GridRow { coords: z.iter().flat_map(|c| [c.re, c.im]).collect(), h_min, h_max });
    }
    if rows.iter().all(|r| r.h_min.is_nan()) {
        return Err(first_error.unwrap_or(Error::Domain("empty grid".into())));
    }
    let skipped = rows.iter().filter(|r| r.h_min.is_nan()).count();
    if skipped > 0 {
        eprintln!("{skipped} of {} grid cells could not be evaluated and are reported as nan", rows.len());
    }
    let csv = (a.format == Format::Csv).then(|| {
        let mut header: Vec<String> = (1..=n).flat_map(|k| [format!("re(z{k})"), format!("im(z{k})")]).collect();
        header.push("H_min".into());
        header.push("H_max".into());
        let mut out = header.join(",");
        out.push('\n');
        for r in &rows {
            let cols: Vec<String> = r.coords.iter().chain([&r.h_min, &r.h_max]).map(|&v| fmt_f64(v)).collect();
            out.push_str(&cols.join(","));
            out.push('\n');
        }
        out
    });
    Ok(Computed { results: Results::Grid(rows), checks: Vec::new(), csv })
}

fn run_selftest_cmd(a: &SelftestArgs) -> Result<Computed> {
    let props = run_selftest(a.seed);
    let checks = props
        .iter()
        .map(|p| match p.margin {
            Some(m) if p.passed => m.max(0.0),
            Some(m) => m.min(-f64::MIN_POSITIVE),
            None => f64::NEG_INFINITY,
        })
        .collect();
    Ok(Computed { results: Results::Selftest(props), checks, csv: None })
}

fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Hsc(_) => None,
        Command::Extrema(a) => Some(a.seed),
        Command::DecomposeCheck(a) => (a.at.point.is_empty()).then_some(a.at.seed),
        Command::WuVerify(a) => Some(a.at.seed),
        Command::Grid(a) => Some(a.seed),
        Command::Selftest(a) => Some(a.seed),
    }
}

/// What a run produced: a report, and for CSV grids the CSV text.
pub struct Outcome {
    pub report: RunReport,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.status.exit_code()
    }

    /// The text to write: CSV for grids in CSV format, JSON otherwise.
    pub fn body(&self) -> String {
        match (&self.csv, &self.report.status) {
            (Some(csv), Status::Pass) => csv.clone(),
            _ => self.report.to_json(),
        }
    }
}

/// Runs a parsed command. `echo` is recorded verbatim in the report.
pub fn run(cli: &Cli, echo: Vec<String>) -> Outcome {
    let start = Instant::now();
    let computed = match &cli.command {
        Command::Hsc(a) => run_hsc(a),
        Command::Extrema(a) => run_extrema(a),
        Command::DecomposeCheck(a) => run_decompose(a),
        Command::WuVerify(a) => run_wu(a),
        Command::Grid(a) => run_grid(a),
        Command::Selftest(a) => run_selftest_cmd(a),
    };
    let wall_time_s = cli.timing.then(|| start.elapsed().as_secs_f64());
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command: echo,
        seed: seed_of(&cli.command),
        results: None,
        summary: Summary { checks: 0, passed: 0, failed: 0, worst_margin: None },
        status: Status::Pass,
        error: None,
        wall_time_s,
    };
    match computed {
        Ok(c) => {
            let passed = c.checks.iter().filter(|&&m| m >= 0.0).count();
            report.summary = Summary {
                checks: c.checks.len(),
                passed,
                failed: c.checks.len() - passed,
                worst_margin: c.checks.iter().copied().reduce(f64::min),
            };
            report.status = if passed == c.checks.len() { Status::Pass } else { Status::Fail };
            report.results = Some(c.results);
            Outcome { report, csv: c.csv }
        }
        Err(e) => {
            report.status = Status::Error;
            report.error = Some(ErrorInfo { kind: error_kind(&e), message: e.to_string() });
            Outcome { report, csv: None }
        }
    }
}

/// Applies the optional `THREADS` override to the global thread pool.
pub fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Full entry point: parse, run, write output. Returns the exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    configure_threads();
    let cli = match parse_cli(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli, args);
    if let Some(err) = &outcome.report.error {
        eprintln!("error: {}", err.message);
    }
    let body = outcome.body();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|_| out.flush()) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error: cannot write to stdout: {e}");
                    return 2;
                }
            }
        }
    }
    outcome.exit_code()
}
