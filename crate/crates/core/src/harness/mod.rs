//! Monte Carlo experiments: interval coverage, size and power of the
//! unit-root test, and samples of standardized estimates.
//!
//! Replication `r` of a scenario draws from stream
//! `(seed, hash(scenario) ^ r)`, so any scenario can be rerun on its own and
//! results do not depend on the thread count. Critical values come from one
//! shared limit sample per `(beta, gamma)` node rather than a fresh sample
//! per replication.

mod stats;

pub use stats::{
    kde, ks_distance, qq_pairs, silverman_bandwidth, wilson_interval, DensityCurve,
    KDE_GRID_POINTS,
};

use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cir::{DirectLimitSampler, GridLimitSampler, DEFAULT_DRAWS, DEFAULT_STEPS};
use crate::error::{Error, Result};
use crate::estimate::{cls_alpha, cml_fit, CmlMode};
use crate::infer::{ci_nearly_unstable_from_fit, standard_normal_quantile, urt_from_fit};
use crate::model::InarchParams;
use crate::simulate::{derive_seed, hash_words, simulate_inarch, RngStream};

pub const DEFAULT_REPLICATIONS: usize = 10_000;
/// Draws per node of the `gamma` grid used by coverage studies.
pub const DEFAULT_GRID_DRAWS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub replications: usize,
    pub seed: u64,
    /// Worker threads; `None` lets the pool pick.
    pub threads: Option<usize>,
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub ns: Vec<usize>,
    pub kappa: u64,
    /// Confidence levels for coverage studies.
    pub levels: Vec<f64>,
    /// Significance levels for size and power studies.
    pub zetas: Vec<f64>,
    pub limit_steps: usize,
    /// Draws of the shared `D_0` sample used for critical values.
    pub limit_draws: usize,
    /// Draws per node of the `gamma` grid used for interval quantiles.
    pub grid_draws: usize,
    /// Estimate `beta` by conditional maximum likelihood in each replication
    /// and treat the estimate as known.
    pub estimate_beta: bool,
    /// Spacing ratio of the `beta` grid used when `estimate_beta` is set.
    pub beta_grid_ratio: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            replications: DEFAULT_REPLICATIONS,
            seed: 1,
            threads: None,
            betas: vec![1.0],
            alphas: vec![0.999, 0.99, 0.98, 0.9, 0.8, 0.7],
            ns: vec![500],
            kappa: 0,
            levels: vec![0.9, 0.95, 0.99],
            zetas: vec![0.1, 0.05, 0.01],
            limit_steps: DEFAULT_STEPS,
            limit_draws: DEFAULT_DRAWS,
            grid_draws: DEFAULT_GRID_DRAWS,
            estimate_beta: false,
            beta_grid_ratio: 1.1,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::invalid("replications must be at least 1"));
        }
        if self.betas.is_empty() || self.ns.is_empty() {
            return Err(Error::invalid("scenario grid needs at least one beta and one n"));
        }
        for &b in &self.betas {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::invalid(format!("beta must be positive, got {b}")));
            }
        }
        for &a in &self.alphas {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::invalid(format!("alpha must be non-negative, got {a}")));
            }
        }
        if self.ns.iter().any(|&n| n < 2) {
            return Err(Error::invalid("sample sizes must be at least 2"));
        }
        for &z in self.levels.iter().chain(&self.zetas) {
            if !(z > 0.0 && z < 1.0) {
                return Err(Error::invalid(format!("levels must lie in (0, 1), got {z}")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads must be at least 1"));
        }
        if self.limit_steps < 2 || self.limit_draws == 0 || self.grid_draws == 0 {
            return Err(Error::invalid("limit sampling needs steps >= 2 and draws >= 1"));
        }
        if !(self.beta_grid_ratio > 1.0) {
            return Err(Error::invalid("beta grid ratio must exceed 1"));
        }
        Ok(())
    }

    /// `(beta, n, alpha)` in grid order.
    pub fn scenarios(&self) -> Vec<Scenario> {
        let mut out = Vec::new();
        for &beta in &self.betas {
            for &n in &self.ns {
                for &alpha in &self.alphas {
                    out.push(Scenario { beta, alpha, n });
                }
            }
        }
        out
    }

    fn unit_root_scenarios(&self) -> Vec<Scenario> {
        let mut out = Vec::new();
        for &beta in &self.betas {
            for &n in &self.ns {
                out.push(Scenario { beta, alpha: 1.0, n });
            }
        }
        out
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = self.threads {
            builder = builder.num_threads(t);
        }
        builder
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
    }

    fn limit_seed(&self) -> u64 {
        derive_seed(self.seed, "limit")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub beta: f64,
    pub alpha: f64,
    pub n: usize,
}

impl Scenario {
    fn stream_base(&self, kappa: u64) -> u64 {
        hash_words(&[self.beta.to_bits(), self.alpha.to_bits(), self.n as u64, kappa])
    }

    fn series_stream(&self, seed: u64, kappa: u64, r: usize) -> RngStream {
        RngStream::new(seed, self.stream_base(kappa) ^ r as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Coverage,
    Size,
    Power,
}

/// One cell: a proportion with its 99% Wilson interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub metric: Metric,
    pub beta: f64,
    pub alpha: f64,
    pub n: usize,
    /// Confidence level (coverage) or significance level (size, power).
    pub level: f64,
    pub successes: usize,
    pub trials: usize,
    pub proportion: f64,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
}

impl ReportRow {
    fn new(metric: Metric, s: &Scenario, level: f64, successes: usize, trials: usize) -> Self {
        let (wilson_lower, wilson_upper) =
            wilson_interval(successes, trials, standard_normal_quantile(0.995));
        Self {
            metric,
            beta: s.beta,
            alpha: s.alpha,
            n: s.n,
            level,
            successes,
            trials,
            proportion: successes as f64 / trials as f64,
            wilson_lower,
            wilson_upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub experiment: String,
    pub config: McConfig,
    pub critical_values: String,
    pub limit_samples: usize,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub metadata: ReportMetadata,
}

impl ExperimentReport {
    pub fn row(&self, beta: f64, alpha: f64, n: usize, level: f64) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.beta == beta && r.alpha == alpha && r.n == n && r.level == level)
    }

    /// The same report with the wall time zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        out.metadata.wall_time_secs = 0.0;
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::invalid(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Vec<ReportRow>> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        Ok(r.deserialize().collect::<std::result::Result<Vec<ReportRow>, _>>()?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        s.push('\n');
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()?).map_err(|e| Error::io(path, e))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// Write `(x, y)` pairs as a two-column CSV with the given header.
pub fn write_pairs_csv(path: &Path, header: (&str, &str), pairs: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::invalid(format!("{}: {other:?}", path.display())),
    })?;
    w.write_record([header.0, header.1])?;
    for (x, y) in pairs {
        w.serialize((x, y))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn simulate_fit(
    config: &McConfig,
    s: &Scenario,
    r: usize,
    estimate_beta: bool,
) -> Result<(f64, f64)> {
    let params = InarchParams::new(s.beta, s.alpha, config.kappa)?;
    let series = simulate_inarch(&params, s.n, &mut s.series_stream(config.seed, config.kappa, r))?;
    let beta = if estimate_beta {
        cml_fit(&series, CmlMode::Joint)?.beta_hat
    } else {
        s.beta
    };
    Ok((cls_alpha(&series, beta)?.alpha_hat, beta))
}

/// Fraction of replications whose nearly unstable interval covers the true
/// `alpha`, for every scenario and level.
pub fn run_coverage(config: &McConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let mut provider = GridLimitSampler::new(config.limit_steps, config.grid_draws, config.limit_seed());
    if config.estimate_beta {
        provider = provider.with_beta_grid(config.beta_grid_ratio)?;
    }
    let pool = config.pool()?;
    let mut rows = Vec::new();
    for s in config.scenarios() {
        let fits = pool.install(|| {
            (0..config.replications)
                .into_par_iter()
                .map(|r| simulate_fit(config, &s, r, config.estimate_beta))
                .collect::<Result<Vec<_>>>()
        })?;
        // Quantile lookups may trigger node sampling, which parallelizes on
        // its own; keep them out of the replication loop.
        let hits = pool.install(|| -> Result<Vec<usize>> {
            let mut hits = vec![0usize; config.levels.len()];
            for &(alpha_hat, beta) in &fits {
                for (i, &level) in config.levels.iter().enumerate() {
                    let ci = ci_nearly_unstable_from_fit(alpha_hat, s.n, beta, &provider, level)?;
                    if ci.contains(s.alpha) {
                        hits[i] += 1;
                    }
                }
            }
            Ok(hits)
        })?;
        for (i, &level) in config.levels.iter().enumerate() {
            rows.push(ReportRow::new(Metric::Coverage, &s, level, hits[i], fits.len()));
        }
    }
    let note = format!(
        "quantiles of D_gamma at gamma_hat = max(0, n (1 - alpha_hat)) interpolated from a gamma grid{}; \
         each node is one shared sample of {} draws with {} steps (seed {}), a variance source common to all replications",
        if config.estimate_beta { " and beta grid" } else { "" },
        config.grid_draws,
        config.limit_steps,
        config.limit_seed()
    );
    Ok(report("coverage", config, rows, note, provider.nodes_sampled(), start))
}

/// Rejection rate of the unit-root test on unit-root data, per `(beta, n)`
/// and significance level.
pub fn run_size(config: &McConfig) -> Result<ExperimentReport> {
    config.validate()?;
    rejection_study(config, Metric::Size, config.unit_root_scenarios())
}

/// Rejection rate of the unit-root test under `alpha < 1`, per scenario and
/// significance level.
pub fn run_power(config: &McConfig) -> Result<ExperimentReport> {
    config.validate()?;
    if let Some(a) = config.alphas.iter().find(|&&a| a >= 1.0) {
        return Err(Error::invalid(format!("power scenarios need alpha < 1, got {a}")));
    }
    rejection_study(config, Metric::Power, config.scenarios())
}

fn rejection_study(
    config: &McConfig,
    metric: Metric,
    scenarios: Vec<Scenario>,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let pool = config.pool()?;
    let sampler = DirectLimitSampler::new(config.limit_steps, config.limit_draws, config.limit_seed());
    let mut rows = Vec::new();
    for s in scenarios {
        let d0 = pool.install(|| sampler.distribution(s.beta, 0.0))?;
        let rejections: Vec<Vec<bool>> = pool.install(|| {
            (0..config.replications)
                .into_par_iter()
                .map(|r| {
                    let (alpha_hat, _) = simulate_fit(config, &s, r, false)?;
                    config
                        .zetas
                        .iter()
                        .map(|&z| Ok(urt_from_fit(alpha_hat, s.n, &d0, z)?.reject))
                        .collect::<Result<Vec<bool>>>()
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for (i, &z) in config.zetas.iter().enumerate() {
            let k = rejections.iter().filter(|v| v[i]).count();
            rows.push(ReportRow::new(metric, &s, z, k, rejections.len()));
        }
    }
    let note = format!(
        "one shared D_0 sample per beta: {} draws, {} steps, seed {}",
        config.limit_draws,
        config.limit_steps,
        config.limit_seed()
    );
    let name = match metric {
        Metric::Size => "size",
        _ => "power",
    };
    let samples = config.betas.len();
    Ok(report(name, config, rows, note, samples, start))
}

fn report(
    experiment: &str,
    config: &McConfig,
    rows: Vec<ReportRow>,
    critical_values: String,
    limit_samples: usize,
    start: Instant,
) -> ExperimentReport {
    ExperimentReport {
        rows,
        metadata: ReportMetadata {
            experiment: experiment.to_string(),
            config: config.clone(),
            critical_values,
            limit_samples,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// `sqrt(n) (alpha_hat - alpha)`, the stationary normalization.
    SqrtN,
    /// `n (alpha_hat - alpha)`, the nearly unstable normalization.
    N,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizedSample {
    pub scenario: Scenario,
    pub scaling: Scaling,
    pub values: Vec<f64>,
}

/// One standardized least-squares estimate per replication, per scenario.
pub fn standardized_estimates(config: &McConfig, scaling: Scaling) -> Result<Vec<StandardizedSample>> {
    config.validate()?;
    let pool = config.pool()?;
    config
        .scenarios()
        .into_iter()
        .map(|s| {
            let factor = match scaling {
                Scaling::SqrtN => (s.n as f64).sqrt(),
                Scaling::N => s.n as f64,
            };
            let values = pool.install(|| {
                (0..config.replications)
                    .into_par_iter()
                    .map(|r| Ok(factor * (simulate_fit(config, &s, r, false)?.0 - s.alpha)))
                    .collect::<Result<Vec<f64>>>()
            })?;
            Ok(StandardizedSample {
                scenario: s,
                scaling,
                values,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(reps: usize) -> McConfig {
        McConfig {
            replications: reps,
            seed: 3,
            alphas: vec![0.99, 0.9],
            ns: vec![100],
            limit_steps: 200,
            limit_draws: 2000,
            grid_draws: 500,
            ..McConfig::default()
        }
    }

    #[test]
    fn one_replication_gives_degenerate_proportions() {
        let report = run_coverage(&small(1)).unwrap();
        assert_eq!(report.rows.len(), 2 * 3);
        for row in &report.rows {
            assert!(row.proportion == 0.0 || row.proportion == 1.0);
            assert_eq!(row.trials, 1);
        }
    }

    #[test]
    fn every_scenario_gets_one_row_per_level() {
        let mut c = small(50);
        c.ns = vec![50, 100];
        let size = run_size(&c).unwrap();
        assert_eq!(size.rows.len(), 2 * 3);
        let power = run_power(&c).unwrap();
        assert_eq!(power.rows.len(), 2 * 2 * 3);
        for row in size.rows.iter().chain(&power.rows) {
            assert!((0.0..=1.0).contains(&row.proportion));
            assert!(row.wilson_lower <= row.proportion && row.proportion <= row.wilson_upper);
        }
        assert!(size.rows.iter().all(|r| r.alpha == 1.0 && r.metric == Metric::Size));
    }

    #[test]
    fn median_threshold_rejects_half() {
        let mut c = small(2000);
        c.zetas = vec![0.5];
        c.ns = vec![200];
        c.limit_steps = 1000;
        c.limit_draws = 20_000;
        let p = run_size(&c).unwrap().rows[0].proportion;
        assert!((p - 0.5).abs() < 0.05, "{p}");
    }

    #[test]
    fn scenarios_are_reproducible_in_isolation() {
        let c = small(30);
        let both = standardized_estimates(&c, Scaling::N).unwrap();
        let mut only = c.clone();
        only.alphas = vec![0.9];
        let one = standardized_estimates(&only, Scaling::N).unwrap();
        assert_eq!(both[1], one[0]);
        assert_eq!(both[0].values.len(), 30);
    }

    #[test]
    fn thread_count_does_not_change_reports() {
        let mut c = small(200);
        c.threads = Some(1);
        let a = run_coverage(&c).unwrap();
        c.threads = Some(4);
        let b = run_coverage(&c).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let report = run_size(&small(20)).unwrap();
        let text = report.to_csv().unwrap();
        assert_eq!(ExperimentReport::from_csv(&text).unwrap(), report.rows);
        assert!(text.starts_with("metric,beta,alpha,n,level,"));
    }

    #[test]
    fn config_json_uses_defaults_for_missing_fields() {
        let c: McConfig = serde_json::from_str(r#"{"replications": 5, "alphas": [0.5]}"#).unwrap();
        assert_eq!(c.replications, 5);
        assert_eq!(c.ns, vec![500]);
        assert!(serde_json::from_str::<McConfig>(r#"{"replicates": 5}"#).is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = small(10);
        c.replications = 0;
        assert!(c.validate().is_err());
        let mut c = small(10);
        c.levels = vec![1.0];
        assert!(c.validate().is_err());
        let mut c = small(10);
        c.alphas = vec![1.0];
        assert!(run_power(&c).is_err());
    }
}
