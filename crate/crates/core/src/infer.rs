//! Confidence intervals for `alpha` under the stationary and nearly unstable
//! regimes, the unit-root test, and the empirical distribution they share.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::cir::LimitProvider;
use crate::error::{Error, Result};
use crate::estimate::cls_alpha;
use crate::model::stationary_cls_avar;
use crate::simulate::CountSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub beta: f64,
    pub gamma: f64,
    pub steps: usize,
    pub draws: usize,
    pub seed: u64,
}

/// A sorted Monte Carlo sample.
///
/// Quantiles interpolate linearly between order statistics: the level-`z`
/// quantile sits at zero-based rank `(len - 1) z`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sample: Vec<f64>,
    provenance: Option<Provenance>,
}

impl EmpiricalDistribution {
    pub fn new(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::invalid("empirical distribution needs at least one value"));
        }
        if sample.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("sample contains NaN"));
        }
        sample.sort_by(f64::total_cmp);
        Ok(Self {
            sample,
            provenance: None,
        })
    }

    pub fn with_provenance(sample: Vec<f64>, provenance: Provenance) -> Result<Self> {
        let mut dist = Self::new(sample)?;
        dist.provenance = Some(provenance);
        Ok(dist)
    }

    pub fn sample(&self) -> &[f64] {
        &self.sample
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn quantile(&self, level: f64) -> Result<f64> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::invalid(format!("quantile level must be in (0, 1), got {level}")));
        }
        Ok(self.quantile_unchecked(level))
    }

    fn quantile_unchecked(&self, level: f64) -> f64 {
        let s = &self.sample;
        let pos = (s.len() - 1) as f64 * level;
        let lo = pos.floor() as usize;
        if lo + 1 >= s.len() {
            return s[s.len() - 1];
        }
        let frac = pos - lo as f64;
        s[lo] + frac * (s[lo + 1] - s[lo])
    }

    /// Fraction of the sample `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.sample.partition_point(|&v| v <= x) as f64 / self.sample.len() as f64
    }

    /// The largest level whose quantile does not exceed `x`: the inverse of
    /// [`quantile`](Self::quantile). Within `1 / len` of [`ecdf`](Self::ecdf),
    /// and exactly consistent with the quantile rule, so that
    /// `x < quantile(z)` iff `interpolated_cdf(x) < z`.
    pub fn interpolated_cdf(&self, x: f64) -> f64 {
        let s = &self.sample;
        let count = s.partition_point(|&v| v <= x);
        if count == 0 {
            return 0.0;
        }
        let i = count - 1;
        if i + 1 >= s.len() {
            return 1.0;
        }
        let frac = (x - s[i]) / (s[i + 1] - s[i]);
        (i as f64 + frac) / (s.len() - 1) as f64
    }

    pub fn mean(&self) -> f64 {
        self.sample.iter().sum::<f64>() / self.sample.len() as f64
    }

    pub fn median(&self) -> f64 {
        self.quantile_unchecked(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    StationaryNormal,
    NearlyUnstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiResult {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: CiMethod,
    pub alpha_hat: f64,
}

impl CiResult {
    pub fn contains(&self, alpha: f64) -> bool {
        self.lower <= alpha && alpha <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UrtResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    pub zeta: f64,
    pub alpha_hat: f64,
    pub n: usize,
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level must be in (0, 1), got {level}")));
    }
    Ok(())
}

pub fn standard_normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// `alpha_hat ∓ z sqrt(sigma^2 / n)` from the stationary normal limit, with
/// the variance evaluated at `max(alpha_hat, 0)`.
pub fn ci_stationary(series: &CountSeries, beta: f64, level: f64) -> Result<CiResult> {
    check_level(level)?;
    let fit = cls_alpha(series, beta)?;
    let avar = stationary_cls_avar(beta, fit.alpha_hat.max(0.0))?;
    let half = standard_normal_quantile(0.5 + level / 2.0) * (avar / fit.n as f64).sqrt();
    Ok(CiResult {
        lower: fit.alpha_hat - half,
        upper: fit.alpha_hat + half,
        level,
        method: CiMethod::StationaryNormal,
        alpha_hat: fit.alpha_hat,
    })
}

/// Interval from the pivot `n (alpha_hat - alpha_n) ≈ D_gamma` with the
/// plug-in `gamma_hat = max(0, n (1 - alpha_hat))`:
/// `[alpha_hat - q_{(1+level)/2} / n, alpha_hat - q_{(1-level)/2} / n]`.
pub fn ci_nearly_unstable(
    series: &CountSeries,
    beta: f64,
    provider: &dyn LimitProvider,
    level: f64,
) -> Result<CiResult> {
    check_level(level)?;
    let fit = cls_alpha(series, beta)?;
    ci_nearly_unstable_from_fit(fit.alpha_hat, fit.n, beta, provider, level)
}

pub fn ci_nearly_unstable_from_fit(
    alpha_hat: f64,
    n: usize,
    beta: f64,
    provider: &dyn LimitProvider,
    level: f64,
) -> Result<CiResult> {
    let nf = n as f64;
    let gamma_hat = (nf * (1.0 - alpha_hat)).max(0.0);
    let q = provider.quantiles(beta, gamma_hat, &[0.5 + level / 2.0, 0.5 - level / 2.0])?;
    Ok(CiResult {
        lower: alpha_hat - q[0] / nf,
        upper: alpha_hat - q[1] / nf,
        level,
        method: CiMethod::NearlyUnstable,
        alpha_hat,
    })
}

/// Test `alpha = 1` against `alpha < 1`: reject when `n (alpha_hat - 1)`
/// falls strictly below the `zeta`-quantile of `D_0`.
pub fn unit_root_test(
    series: &CountSeries,
    beta: f64,
    d0: &EmpiricalDistribution,
    zeta: f64,
) -> Result<UrtResult> {
    let fit = cls_alpha(series, beta)?;
    urt_from_fit(fit.alpha_hat, fit.n, d0, zeta)
}

pub fn urt_from_fit(
    alpha_hat: f64,
    n: usize,
    d0: &EmpiricalDistribution,
    zeta: f64,
) -> Result<UrtResult> {
    let critical_value = d0.quantile(zeta)?;
    let statistic = n as f64 * (alpha_hat - 1.0);
    Ok(UrtResult {
        statistic,
        critical_value,
        p_value: d0.interpolated_cdf(statistic),
        reject: statistic < critical_value,
        zeta,
        alpha_hat,
        n,
    })
}
