//! Reproducible generation of Poisson INARCH(1) trajectories.

mod poisson;
mod rng;

pub use poisson::{ln_pmf as poisson_ln_pmf, poisson_draw};
pub use rng::{derive_seed, hash_words, mix64, RngStream};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{InarchParams, NearlyUnstableSpec};

/// A count trajectory `(X_0, X_1, ..., X_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub values: Vec<u64>,
    pub params_used: Option<InarchParams>,
}

impl CountSeries {
    pub fn new(values: Vec<u64>) -> Self {
        Self {
            values,
            params_used: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The scaling index `n`: number of values after `X_0`.
    pub fn n(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Pairs `(X_{t-1}, X_t)` for `t = 2..=n`, the terms of the estimating sums.
    /// `X_0` never enters.
    pub fn regression_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .get(1..)
            .unwrap_or(&[])
            .windows(2)
            .map(|w| (w[0] as f64, w[1] as f64))
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.values.len() < needed {
            return Err(Error::SeriesTooShort {
                needed,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Simulate `(X_0 = kappa, X_1, ..., X_n)`.
pub fn simulate_inarch(params: &InarchParams, n: usize, rng: &mut RngStream) -> Result<CountSeries> {
    params.validate()?;
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let mut series = CountSeries {
        values: Vec::with_capacity(n + 1),
        params_used: Some(*params),
    };
    series.values.push(params.kappa);
    extend_inarch(&mut series, params, n, rng)?;
    Ok(series)
}

/// Append `steps` further observations to `series`, continuing from its last
/// value. Drawing a path in chunks is identical to drawing it at once.
pub fn extend_inarch(
    series: &mut CountSeries,
    params: &InarchParams,
    steps: usize,
    rng: &mut RngStream,
) -> Result<()> {
    let mut prev = *series
        .values
        .last()
        .ok_or_else(|| Error::invalid("cannot extend an empty series"))?;
    series.values.reserve(steps);
    for _ in 0..steps {
        let lambda = params.beta + params.alpha * prev as f64;
        prev = poisson_draw(lambda, rng)?;
        series.values.push(prev);
    }
    Ok(())
}

/// Simulate a nearly unstable path of length `n` with `alpha_n = 1 - gamma / n`.
pub fn simulate_nu_inarch(
    spec: &NearlyUnstableSpec,
    kappa: u64,
    rng: &mut RngStream,
) -> Result<CountSeries> {
    spec.validate()?;
    simulate_inarch(&spec.params(kappa), spec.n, rng)
}

/// The normalized step path `t ↦ X_{floor(nt)} / n` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    n: usize,
    values: Vec<f64>,
}

impl StepPath {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Knots `k / n` for `k = 0..=n`.
    pub fn grid(&self) -> Vec<f64> {
        (0..=self.n).map(|k| k as f64 / self.n as f64).collect()
    }

    /// Value on `[k/n, (k+1)/n)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-continuous evaluation; `t` is clamped to `[0, 1]`.
    pub fn value_at(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = ((self.n as f64 * t).floor() as usize).min(self.n);
        self.values[k]
    }
}

pub fn normalize_path(series: &CountSeries) -> Result<StepPath> {
    series.require_len(2)?;
    let n = series.n();
    let scale = n as f64;
    Ok(StepPath {
        n,
        values: series.values.iter().map(|&x| x as f64 / scale).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{limiting_mean_scale, marginal_mean};

    fn mean_sd(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v.sqrt())
    }

    #[test]
    fn iid_case_mean() {
        let params = InarchParams::new(1.0, 0.0, 0).unwrap();
        let s = simulate_inarch(&params, 1_000_000, &mut RngStream::new(1, 0)).unwrap();
        assert_eq!(s.len(), 1_000_001);
        let xs: Vec<f64> = s.values[1..].iter().map(|&x| x as f64).collect();
        let (m, _) = mean_sd(&xs);
        assert!((m - 1.0).abs() < 0.003, "mean {m}");
    }

    #[test]
    fn third_value_mean_matches_recursion() {
        let params = InarchParams::new(1.0, 0.5, 0).unwrap();
        let reps = 100_000;
        let x3: Vec<f64> = (0..reps)
            .map(|r| {
                let s = simulate_inarch(&params, 3, &mut RngStream::new(2, r)).unwrap();
                s.values[3] as f64
            })
            .collect();
        let (m, sd) = mean_sd(&x3);
        let target = marginal_mean(&params, 3);
        assert!((target - 1.75).abs() < 1e-12);
        assert!((m - target).abs() < 3.0 * sd / (reps as f64).sqrt(), "mean {m}");
    }

    #[test]
    fn reproducible_and_stream_sensitive() {
        let params = InarchParams::new(1.0, 0.9, 3).unwrap();
        let a = simulate_inarch(&params, 200, &mut RngStream::new(9, 4)).unwrap();
        let b = simulate_inarch(&params, 200, &mut RngStream::new(9, 4)).unwrap();
        let c = simulate_inarch(&params, 200, &mut RngStream::new(9, 5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
        assert_eq!(a.values[0], 3);
    }

    #[test]
    fn chunked_equals_contiguous() {
        let params = InarchParams::new(0.7, 0.95, 2).unwrap();
        let whole = simulate_inarch(&params, 500, &mut RngStream::new(5, 5)).unwrap();
        let mut rng = RngStream::new(5, 5);
        let mut chunked = simulate_inarch(&params, 123, &mut rng).unwrap();
        extend_inarch(&mut chunked, &params, 377, &mut rng).unwrap();
        assert_eq!(whole, chunked);
    }

    #[test]
    fn nu_alpha_and_edges() {
        let spec = NearlyUnstableSpec::new(1.0, 1.0, 500).unwrap();
        let s = simulate_nu_inarch(&spec, 0, &mut RngStream::new(1, 1)).unwrap();
        assert_eq!(s.len(), 501);
        assert!((s.params_used.unwrap().alpha - 0.998).abs() < 1e-15);
        let too_big = NearlyUnstableSpec {
            beta: 1.0,
            gamma: 600.0,
            n: 500,
        };
        assert!(simulate_nu_inarch(&too_big, 0, &mut RngStream::new(1, 1)).is_err());
        let full = NearlyUnstableSpec::new(2.0, 50.0, 50).unwrap();
        assert_eq!(full.params(0).alpha, 0.0);
    }

    #[test]
    fn unit_root_mean_at_horizon() {
        let spec = NearlyUnstableSpec::new(1.0, 0.0, 100).unwrap();
        let reps = 10_000;
        let xs: Vec<f64> = (0..reps)
            .map(|r| {
                let s = simulate_nu_inarch(&spec, 2, &mut RngStream::new(4, r)).unwrap();
                *s.values.last().unwrap() as f64
            })
            .collect();
        let (m, sd) = mean_sd(&xs);
        // E(X_n) = beta n + kappa
        assert!((m - 102.0).abs() < 3.0 * sd / (reps as f64).sqrt(), "mean {m}");
    }

    #[test]
    fn full_reversion_is_iid_after_first_step() {
        let spec = NearlyUnstableSpec::new(3.0, 1000.0, 1000).unwrap();
        let s = simulate_nu_inarch(&spec, 40, &mut RngStream::new(8, 0)).unwrap();
        let xs: Vec<f64> = s.values[2..].iter().map(|&x| x as f64).collect();
        let (m, sd) = mean_sd(&xs);
        assert!((m - 3.0).abs() < 3.0 * sd / (xs.len() as f64).sqrt());
    }

    #[test]
    fn lag_autocorrelation_is_geometric() {
        let params = InarchParams::new(1.0, 0.5, 0).unwrap();
        let s = simulate_inarch(&params, 1_000_000, &mut RngStream::new(6, 0)).unwrap();
        let xs: Vec<f64> = s.values[1000..].iter().map(|&x| x as f64).collect();
        let n = xs.len();
        let (m, sd) = mean_sd(&xs);
        for k in 1..=3usize {
            let acf = xs[..n - k]
                .iter()
                .zip(&xs[k..])
                .map(|(a, b)| (a - m) * (b - m))
                .sum::<f64>()
                / (n as f64 * sd * sd);
            // Bartlett-style SE for an AR(1)-type ACF: sqrt((1 + a^2) / (1 - a^2) / n)
            let se = ((1.0 + 0.25) / 0.75 / n as f64).sqrt();
            assert!((acf - 0.5f64.powi(k as i32)).abs() < 3.0 * se, "k={k} acf={acf}");
        }
    }

    #[test]
    fn normalized_path_basics() {
        let s = CountSeries::new(vec![4; 11]);
        let path = normalize_path(&s).unwrap();
        assert!(path.values().iter().all(|&v| v == 0.4));
        let s = CountSeries::new(vec![0, 3, 1, 7]);
        let path = normalize_path(&s).unwrap();
        assert_eq!(path.value_at(1.0), 7.0 / 3.0);
        assert_eq!(path.value_at(0.0), 0.0);
        assert_eq!(path.value_at(0.34), 1.0);
        assert_eq!(path.value_at(2.0 / 3.0), 1.0 / 3.0);
        assert_eq!(path.grid().len(), 4);
        assert!(normalize_path(&CountSeries::new(vec![1])).is_err());
    }

    #[test]
    fn normalized_endpoint_mean() {
        let spec = NearlyUnstableSpec::new(1.0, 1.0, 500).unwrap();
        let reps = 10_000;
        let ends: Vec<f64> = (0..reps)
            .map(|r| {
                let s = simulate_nu_inarch(&spec, 0, &mut RngStream::new(21, r)).unwrap();
                normalize_path(&s).unwrap().value_at(1.0)
            })
            .collect();
        let (m, sd) = mean_sd(&ends);
        let exact = marginal_mean(&spec.params(0), 500) / 500.0;
        let limit = limiting_mean_scale(&spec, 1.0);
        assert!((exact - limit).abs() < 1e-3);
        assert!((m - limit).abs() < 3.0 * sd / (reps as f64).sqrt() + (exact - limit).abs());
    }

    #[test]
    fn normalized_variance_is_order_one() {
        let var_at = |n: usize| {
            let spec = NearlyUnstableSpec::new(1.0, 1.0, n).unwrap();
            let xs: Vec<f64> = (0..4000)
                .map(|r| {
                    let s = simulate_nu_inarch(&spec, 0, &mut RngStream::new(22, r)).unwrap();
                    normalize_path(&s).unwrap().value_at(0.5)
                })
                .collect();
            mean_sd(&xs).1.powi(2)
        };
        let ratio = var_at(800) / var_at(200);
        // O(1) in n: the ratio stays near 1 instead of growing like n
        assert!(ratio > 0.85 && ratio < 1.15, "ratio {ratio}");
    }
}
