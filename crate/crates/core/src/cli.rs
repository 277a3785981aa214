//! Command-line front end: data ingestion, configuration and the
//! subcommands of the `nuinarch` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::cir::{
    sample_limit, CirParams, CriticalValueTable, DEFAULT_DRAWS, DEFAULT_STEPS, STANDARD_LEVELS,
};
use crate::error::{Error, ErrorKind, Result};
use crate::estimate::{cls_alpha, cml_fit, predicted_means, CmlMode};
use crate::harness::{
    self, kde, qq_pairs, write_pairs_csv, ExperimentReport, McConfig, Scaling, KDE_GRID_POINTS,
};
use crate::infer::{unit_root_test, EmpiricalDistribution, Provenance};
use crate::model::{stationary_cls_avar, InarchParams, NearlyUnstableSpec};
use crate::simulate::{simulate_inarch, CountSeries, RngStream};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ZETA: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "nuinarch", version, about = "Nearly unstable Poisson INARCH(1) toolkit")]
pub struct Cli {
    /// JSON file with default settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Base seed for every random stream [default: 1].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for Monte Carlo work.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Euler steps per unit time when sampling the limit law.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Monte Carlo draws of the limit law.
    #[arg(long, global = true)]
    pub draws: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a Poisson INARCH(1) path.
    Simulate(SimulateArgs),
    /// Estimate beta and alpha and test for a unit root.
    #[command(visible_alias = "urtest")]
    Analyze(AnalyzeArgs),
    /// Sample the limit law and write a critical-value table.
    Tables(TablesArgs),
    /// Monte Carlo experiments.
    Mc {
        #[command(subcommand)]
        experiment: McCommand,
    },
    /// Gaussian kernel density estimate of a column of values.
    Kde(KdeArgs),
    /// Quantile-quantile pairs of a sample against a reference sample.
    Qq(QqArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, conflicts_with = "gamma")]
    pub alpha: Option<f64>,
    /// Use alpha = 1 - gamma / n.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub kappa: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV file with a header row.
    pub data: PathBuf,
    /// Treat beta as known instead of estimating it by maximum likelihood.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Significance level of the test [default: 0.05].
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Count column; defaults to `count`, `deaths`, or the last numeric column.
    #[arg(long)]
    pub column: Option<String>,
    /// Ignore any date column.
    #[arg(long)]
    pub no_date: bool,
    /// Critical-value table for D_0, built by `tables` with the same beta.
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Write observed and predicted means as CSV.
    #[arg(long, value_name = "PATH")]
    pub predictions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Extra quantile levels beyond the standard ones.
    #[arg(long, value_delimiter = ',')]
    pub level: Vec<f64>,
    /// Store quantiles only, without the sorted sample.
    #[arg(long)]
    pub quantiles_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// Coverage of nearly unstable confidence intervals.
    Coverage(McArgs),
    /// Rejection rate of the unit-root test at alpha = 1.
    Size(McArgs),
    /// Rejection rate of the unit-root test for alpha < 1.
    Power(McArgs),
    /// Standardized least-squares estimates, one per replication.
    Standardized(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    SqrtN,
    N,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Comma-separated values; scenarios are all combinations of beta, alpha and n.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Initial value X_0.
    #[arg(long)]
    pub kappa: Option<u64>,
    /// Confidence levels (coverage).
    #[arg(long, value_delimiter = ',')]
    pub level: Vec<f64>,
    /// Significance levels (size, power).
    #[arg(long, value_delimiter = ',')]
    pub zeta: Vec<f64>,
    /// Replications per scenario.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Draws per node of the gamma grid (coverage).
    #[arg(long)]
    pub grid_draws: Option<usize>,
    /// Estimate beta in each replication (coverage).
    #[arg(long)]
    pub estimate_beta: bool,
    #[arg(long, value_enum, default_value = "n")]
    pub scaling: ScalingArg,
}

#[derive(Debug, Args)]
pub struct KdeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub column: Option<String>,
    /// Kernel bandwidth; Silverman's rule when omitted.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, default_value_t = KDE_GRID_POINTS)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct QqArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub column: Option<String>,
    /// Reference sample from a critical-value table.
    #[arg(long, value_name = "PATH", conflicts_with = "reference")]
    pub table: Option<PathBuf>,
    /// Reference sample from a CSV column.
    #[arg(long, value_name = "PATH")]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub reference_column: Option<String>,
}

/// Settings read from `--config`. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub steps: Option<usize>,
    pub draws: Option<usize>,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<usize>,
    pub kappa: Option<u64>,
    pub zeta: Option<f64>,
    pub column: Option<String>,
    pub no_date: Option<bool>,
    pub table: Option<PathBuf>,
    pub mc: Option<McConfig>,
}

impl FileConfig {
    /// A malformed config is a usage error, unlike a malformed data file.
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))
    }
}

/// A parsed count series with its source.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub column: String,
    pub series: CountSeries,
    pub dates: Option<Vec<NaiveDate>>,
}

fn parse_error(path: &Path, row: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        row,
        message: message.into(),
    }
}

fn parse_date(text: &str) -> Option<NaiveDate> {
    let text = text.trim();
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .ok()
        .or_else(|| DateTime::parse_from_rfc3339(text).ok().map(|d| d.date_naive()))
        .or_else(|| {
            NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S")
                .ok()
                .map(|d| d.date())
        })
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<(usize, csv::StringRecord)>)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, record));
    }
    if rows.is_empty() {
        return Err(Error::EmptyData(path.to_path_buf()));
    }
    Ok((header, rows))
}

/// `--column` if given, else `count` or `deaths`, else the last column whose
/// first row is numeric.
fn pick_column(
    path: &Path,
    header: &[String],
    first: &csv::StringRecord,
    requested: Option<&str>,
) -> Result<usize> {
    let find = |name: &str| header.iter().position(|h| h.eq_ignore_ascii_case(name));
    if let Some(name) = requested {
        return find(name).ok_or_else(|| {
            Error::invalid(format!("{}: no column named {name:?}", path.display()))
        });
    }
    if let Some(i) = find("count").or_else(|| find("deaths")) {
        return Ok(i);
    }
    (0..header.len())
        .rev()
        .find(|&i| first.get(i).is_some_and(|v| v.parse::<f64>().is_ok()))
        .ok_or_else(|| Error::invalid(format!("{}: no numeric column", path.display())))
}

/// Read a count series from a CSV export, in chronological order.
pub fn ingest_csv(path: &Path, column: Option<&str>, use_dates: bool) -> Result<DatasetFile> {
    let (header, rows) = read_table(path)?;
    let col = pick_column(path, &header, &rows[0].1, column)?;
    let date_col = if use_dates {
        header.iter().position(|h| h.eq_ignore_ascii_case("date"))
    } else {
        None
    };
    let mut values = Vec::with_capacity(rows.len());
    let mut dates = Vec::new();
    for (line, record) in &rows {
        let cell = record.get(col).unwrap_or("");
        let value: u64 = cell.parse().map_err(|_| {
            let message = match cell.parse::<f64>() {
                Ok(v) if v < 0.0 => format!("negative count {cell:?}"),
                Ok(_) => format!("count {cell:?} is not an integer"),
                Err(_) if cell.is_empty() => "missing count".to_string(),
                Err(_) => format!("count {cell:?} is not a number"),
            };
            parse_error(path, *line, message)
        })?;
        values.push(value);
        if let Some(dc) = date_col {
            let text = record.get(dc).unwrap_or("");
            let date = parse_date(text).ok_or_else(|| {
                parse_error(
                    path,
                    *line,
                    format!("unrecognized date {text:?}; expected ISO-8601 or pass --no-date"),
                )
            })?;
            dates.push(date);
        }
    }
    let mut dates = date_col.map(|_| dates);
    if let Some(d) = &mut dates {
        if d.len() > 1 && d.windows(2).all(|w| w[0] > w[1]) {
            d.reverse();
            values.reverse();
        } else if let Some(i) = d.windows(2).position(|w| w[0] >= w[1]) {
            return Err(parse_error(
                path,
                rows[i + 1].0,
                format!("dates are not in strictly increasing or decreasing order ({} after {})", d[i + 1], d[i]),
            ));
        }
    }
    let series = CountSeries::new(values);
    if series.len() < 3 {
        return Err(Error::SeriesTooShort {
            needed: 3,
            got: series.len(),
        });
    }
    Ok(DatasetFile {
        path: path.to_path_buf(),
        column: header[col].clone(),
        series,
        dates,
    })
}

/// Read one numeric column (chosen as in [`ingest_csv`]) as reals.
pub fn read_values(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let (header, rows) = read_table(path)?;
    let col = pick_column(path, &header, &rows[0].1, column)?;
    rows.iter()
        .map(|(line, record)| {
            let cell = record.get(col).unwrap_or("");
            cell.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(path, *line, format!("{cell:?} is not a finite number")))
        })
        .collect()
}

pub fn write_series_csv(series: &CountSeries) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "count"])?;
    for (t, x) in series.values.iter().enumerate() {
        w.serialize((t, x))?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::invalid(e.to_string()))?)
        .expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub dataset: PathBuf,
    pub column: String,
    pub observations: usize,
    pub n: usize,
    pub beta_hat: f64,
    pub beta_estimated: bool,
    pub alpha_hat: f64,
    /// Standard error of `alpha_hat` from the stationary normal limit, when
    /// `alpha_hat < 1`.
    pub stationary_se: Option<f64>,
    pub statistic: f64,
    pub zeta: f64,
    pub q_zeta: f64,
    pub p_value: f64,
    pub reject: bool,
    pub critical_values: Provenance,
}

pub struct AnalyzeOptions {
    pub beta: Option<f64>,
    pub zeta: f64,
    pub table: Option<PathBuf>,
    pub steps: usize,
    pub draws: usize,
    pub seed: u64,
}

/// Estimate `beta` (unless fixed), then `alpha` with `beta` treated as known,
/// then test `alpha = 1` against `D_0` and compute predicted means.
pub fn cmd_analyze(data: &DatasetFile, opts: &AnalyzeOptions) -> Result<(AnalysisReport, Vec<f64>)> {
    let series = &data.series;
    let (beta, estimated) = match opts.beta {
        Some(b) => (b, false),
        None => (cml_fit(series, CmlMode::Joint)?.beta_hat, true),
    };
    let fit = cls_alpha(series, beta)?;
    let d0 = match &opts.table {
        Some(path) => {
            let table = CriticalValueTable::read(path)?;
            table.check_matches(beta, 0.0)?;
            table.to_distribution()?
        }
        None => sample_limit(&CirParams::new(beta, 0.0, opts.steps)?, opts.draws, opts.seed)?,
    };
    let urt = unit_root_test(series, beta, &d0, opts.zeta)?;
    let stationary_se = (fit.alpha_hat < 1.0)
        .then(|| stationary_cls_avar(beta, fit.alpha_hat.max(0.0)))
        .transpose()?
        .map(|v| (v / fit.n as f64).sqrt());
    let predictions = predicted_means(series, beta, fit.alpha_hat)?;
    let report = AnalysisReport {
        dataset: data.path.clone(),
        column: data.column.clone(),
        observations: series.len(),
        n: fit.n,
        beta_hat: beta,
        beta_estimated: estimated,
        alpha_hat: fit.alpha_hat,
        stationary_se,
        statistic: urt.statistic,
        zeta: urt.zeta,
        q_zeta: urt.critical_value,
        p_value: urt.p_value,
        reject: urt.reject,
        critical_values: *d0.provenance().expect("limit samples carry provenance"),
    };
    Ok((report, predictions))
}

pub fn predictions_csv(data: &DatasetFile, predictions: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match &data.dates {
        Some(_) => w.write_record(["t", "date", "observed", "predicted"])?,
        None => w.write_record(["t", "observed", "predicted"])?,
    }
    for (i, &pred) in predictions.iter().enumerate() {
        let t = i + 1;
        let observed = data.series.values[t];
        match &data.dates {
            Some(d) => w.serialize((t, d[t].to_string(), observed, pred))?,
            None => w.serialize((t, observed, pred))?,
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::invalid(e.to_string()))?)
        .expect("csv output is utf-8"))
}

/// Sample `D_gamma` and package its quantiles (and optionally the sample).
pub fn cmd_tables(
    beta: f64,
    gamma: f64,
    steps: usize,
    draws: usize,
    seed: u64,
    extra_levels: &[f64],
    keep_sample: bool,
) -> Result<CriticalValueTable> {
    let dist = sample_limit(&CirParams::new(beta, gamma, steps)?, draws, seed)?;
    let mut levels = STANDARD_LEVELS.to_vec();
    levels.extend_from_slice(extra_levels);
    CriticalValueTable::from_distribution(&dist, &levels, keep_sample)
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Usage => 2,
        ErrorKind::Data => 3,
        ErrorKind::Numerical => 4,
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

fn check_unit(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::invalid(format!("{name} must lie in (0, 1), got {value}")))
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::read(path)?,
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let threads = cli.threads.or(file.threads);
    let steps = cli.steps.or(file.steps).unwrap_or(DEFAULT_STEPS);
    let draws = cli.draws.or(file.draws).unwrap_or(DEFAULT_DRAWS);
    let out = cli.out.as_deref();
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            if t == 0 {
                return Err(Error::invalid("threads must be at least 1"));
            }
            b = b.num_threads(t);
        }
        b.build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
    };

    match &cli.command {
        Command::Simulate(a) => {
            let beta = a.beta.or(file.beta).unwrap_or(1.0);
            let n = a.n.or(file.n).unwrap_or(500);
            let kappa = a.kappa.or(file.kappa).unwrap_or(0);
            let params = match (a.alpha, a.gamma) {
                (Some(alpha), _) => InarchParams::new(beta, alpha, kappa)?,
                (None, Some(gamma)) => NearlyUnstableSpec::new(beta, gamma, n)?.params(kappa),
                (None, None) => match (file.alpha, file.gamma) {
                    (Some(alpha), _) => InarchParams::new(beta, alpha, kappa)?,
                    (None, Some(gamma)) => NearlyUnstableSpec::new(beta, gamma, n)?.params(kappa),
                    (None, None) => {
                        return Err(Error::invalid("simulate needs --alpha or --gamma"))
                    }
                },
            };
            let series = simulate_inarch(&params, n, &mut RngStream::new(seed, 0))?;
            emit(out, &write_series_csv(&series)?)
        }
        Command::Analyze(a) => {
            let column = a.column.as_deref().or(file.column.as_deref());
            let use_dates = !(a.no_date || file.no_date.unwrap_or(false));
            let data = ingest_csv(&a.data, column, use_dates)?;
            let opts = AnalyzeOptions {
                beta: a.beta.or(file.beta),
                zeta: check_unit("zeta", a.zeta.or(file.zeta).unwrap_or(DEFAULT_ZETA))?,
                table: a.table.clone().or(file.table.clone()),
                steps,
                draws,
                seed,
            };
            let (report, predictions) = pool.install(|| cmd_analyze(&data, &opts))?;
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            emit(out, &json)?;
            if let Some(path) = &a.predictions {
                let text = predictions_csv(&data, &predictions)?;
                fs::write(path, text).map_err(|e| Error::io(path, e))?;
            }
            Ok(())
        }
        Command::Tables(a) => {
            let beta = a.beta.or(file.beta).unwrap_or(1.0);
            let gamma = a.gamma.or(file.gamma).unwrap_or(0.0);
            for &l in &a.level {
                check_unit("level", l)?;
            }
            let table = pool.install(|| {
                cmd_tables(beta, gamma, steps, draws, seed, &a.level, !a.quantiles_only)
            })?;
            emit(out, &table.to_json())
        }
        Command::Mc { experiment } => {
            let (args, kind) = match experiment {
                McCommand::Coverage(a) => (a, "coverage"),
                McCommand::Size(a) => (a, "size"),
                McCommand::Power(a) => (a, "power"),
                McCommand::Standardized(a) => (a, "standardized"),
            };
            let config = mc_config(args, &file, cli)?;
            if kind == "standardized" {
                let scaling = match args.scaling {
                    ScalingArg::SqrtN => Scaling::SqrtN,
                    ScalingArg::N => Scaling::N,
                };
                let samples = harness::standardized_estimates(&config, scaling)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["beta", "alpha", "n", "replication", "value"])?;
                for s in &samples {
                    for (r, v) in s.values.iter().enumerate() {
                        w.serialize((s.scenario.beta, s.scenario.alpha, s.scenario.n, r, v))?;
                    }
                }
                let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
                return emit(out, &String::from_utf8(bytes).expect("csv output is utf-8"));
            }
            let report = match kind {
                "coverage" => harness::run_coverage(&config)?,
                "size" => harness::run_size(&config)?,
                _ => harness::run_power(&config)?,
            };
            emit_report(&report, out)
        }
        Command::Kde(a) => {
            let values = read_values(&a.input, a.column.as_deref())?;
            let curve = kde(&values, a.bandwidth, a.points)?;
            emit_pairs(out, ("x", "density"), &curve.pairs())
        }
        Command::Qq(a) => {
            let sample = read_values(&a.input, a.column.as_deref())?;
            let reference = match (&a.table, &a.reference) {
                (Some(path), _) => CriticalValueTable::read(path)?.to_distribution()?,
                (None, Some(path)) => {
                    EmpiricalDistribution::new(read_values(path, a.reference_column.as_deref())?)?
                }
                (None, None) => return Err(Error::invalid("qq needs --table or --reference")),
            };
            emit_pairs(out, ("reference", "sample"), &qq_pairs(&sample, &reference)?)
        }
    }
}

fn emit_pairs(out: Option<&Path>, header: (&str, &str), pairs: &[(f64, f64)]) -> Result<()> {
    match out {
        Some(path) => write_pairs_csv(path, header, pairs),
        None => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([header.0, header.1])?;
            for p in pairs {
                w.serialize(p)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
            emit(None, &String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

/// CSV rows to `out` (or standard output) and, with `out`, the full report
/// as JSON next to it.
fn emit_report(report: &ExperimentReport, out: Option<&Path>) -> Result<()> {
    emit(out, &report.to_csv()?)?;
    if let Some(path) = out {
        report.write_json(&path.with_extension("json"))?;
    } else {
        eprintln!("wall time: {:.2} s", report.metadata.wall_time_secs);
    }
    Ok(())
}

fn mc_config(args: &McArgs, file: &FileConfig, cli: &Cli) -> Result<McConfig> {
    let mut c = file.mc.clone().unwrap_or_default();
    if let Some(s) = cli.seed.or(file.seed) {
        c.seed = s;
    }
    if let Some(t) = cli.threads.or(file.threads) {
        c.threads = Some(t);
    }
    if let Some(s) = cli.steps.or(file.steps) {
        c.limit_steps = s;
    }
    if let Some(d) = cli.draws.or(file.draws) {
        c.limit_draws = d;
    }
    let list = |flag: &[f64], target: &mut Vec<f64>| {
        if !flag.is_empty() {
            *target = flag.to_vec();
        }
    };
    list(&args.beta, &mut c.betas);
    list(&args.alpha, &mut c.alphas);
    list(&args.level, &mut c.levels);
    list(&args.zeta, &mut c.zetas);
    if !args.n.is_empty() {
        c.ns = args.n.clone();
    }
    if let Some(k) = args.kappa.or(file.kappa) {
        c.kappa = k;
    }
    if let Some(r) = args.reps {
        c.replications = r;
    }
    if let Some(g) = args.grid_draws {
        c.grid_draws = g;
    }
    if args.estimate_beta {
        c.estimate_beta = true;
    }
    c.validate()?;
    Ok(c)
}
