use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{sample_limit, CirParams};
use crate::error::{Error, Result};
use crate::infer::EmpiricalDistribution;

/// Source of `D_gamma` quantiles for interval construction.
///
/// Implementations must be callable from several threads at once and must
/// return the same answer for the same arguments regardless of call order.
pub trait LimitProvider: Send + Sync {
    fn quantiles(&self, beta: f64, gamma: f64, levels: &[f64]) -> Result<Vec<f64>>;
}

type Slot = Arc<OnceLock<std::result::Result<Arc<EmpiricalDistribution>, String>>>;

#[derive(Default)]
struct Memo {
    slots: Mutex<HashMap<(u64, u64), Slot>>,
}

impl Memo {
    fn get(&self, params: CirParams, draws: usize, seed: u64) -> Result<Arc<EmpiricalDistribution>> {
        params.validate()?;
        let key = (params.beta.to_bits(), params.gamma.to_bits());
        let slot = {
            let mut slots = self.slots.lock().unwrap_or_else(|e| e.into_inner());
            slots.entry(key).or_default().clone()
        };
        slot.get_or_init(|| {
            sample_limit(&params, draws, seed)
                .map(Arc::new)
                .map_err(|e| e.to_string())
        })
        .clone()
        .map_err(Error::InvalidParameter)
    }

    fn len(&self) -> usize {
        self.slots.lock().map(|s| s.len()).unwrap_or(0)
    }
}

/// Samples `D_gamma` at exactly the requested `(beta, gamma)`, memoized.
///
/// Every distribution is drawn from the same `(seed, draw index)` streams,
/// so samples for nearby `gamma` share their Brownian paths.
pub struct DirectLimitSampler {
    pub steps: usize,
    pub draws: usize,
    pub seed: u64,
    memo: Memo,
}

impl DirectLimitSampler {
    pub fn new(steps: usize, draws: usize, seed: u64) -> Self {
        Self {
            steps,
            draws,
            seed,
            memo: Memo::default(),
        }
    }

    pub fn distribution(&self, beta: f64, gamma: f64) -> Result<Arc<EmpiricalDistribution>> {
        let params = CirParams::new(beta, gamma, self.steps)?;
        self.memo.get(params, self.draws, self.seed)
    }
}

impl LimitProvider for DirectLimitSampler {
    fn quantiles(&self, beta: f64, gamma: f64, levels: &[f64]) -> Result<Vec<f64>> {
        let dist = self.distribution(beta, gamma)?;
        levels.iter().map(|&z| dist.quantile(z)).collect()
    }
}

/// Samples `D_gamma` on a fixed `gamma` grid and interpolates quantiles
/// linearly between the two neighbouring nodes.
///
/// Nodes are evenly spaced by `linear_step` up to `linear_until`, then
/// geometrically spaced by `ratio`. Keeps Monte Carlo studies with a
/// data-dependent `gamma` per replication at a bounded number of samples.
///
/// With `beta_ratio` set, `beta` is gridded too (nodes `beta_ratio^k`) and
/// quantiles are interpolated bilinearly; otherwise `beta` is used as given.
pub struct GridLimitSampler {
    pub steps: usize,
    pub draws: usize,
    pub seed: u64,
    pub linear_step: f64,
    pub linear_until: f64,
    pub ratio: f64,
    pub beta_ratio: Option<f64>,
    memo: Memo,
}

impl GridLimitSampler {
    pub fn new(steps: usize, draws: usize, seed: u64) -> Self {
        Self {
            steps,
            draws,
            seed,
            linear_step: 0.25,
            linear_until: 10.0,
            ratio: 1.025,
            beta_ratio: None,
            memo: Memo::default(),
        }
    }

    pub fn with_beta_grid(mut self, ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(Error::invalid(format!("beta grid ratio must exceed 1, got {ratio}")));
        }
        self.beta_ratio = Some(ratio);
        Ok(self)
    }

    /// The grid nodes bracketing `gamma`.
    pub fn bracket(&self, gamma: f64) -> (f64, f64) {
        if gamma <= self.linear_until {
            let k = (gamma / self.linear_step).floor();
            let lo = k * self.linear_step;
            (lo, (lo + self.linear_step).min(self.linear_until).max(lo))
        } else {
            let k = ((gamma / self.linear_until).ln() / self.ratio.ln()).floor();
            let lo = self.linear_until * self.ratio.powf(k);
            (lo, lo * self.ratio)
        }
    }

    /// The `beta` nodes bracketing `beta`; both equal `beta` without a `beta` grid.
    pub fn beta_bracket(&self, beta: f64) -> (f64, f64) {
        match self.beta_ratio {
            None => (beta, beta),
            Some(r) => {
                let k = (beta.ln() / r.ln()).floor();
                let lo = r.powf(k);
                if lo > beta {
                    (lo / r, lo)
                } else if lo * r < beta {
                    (lo * r, lo * r * r)
                } else {
                    (lo, lo * r)
                }
            }
        }
    }

    /// Number of distinct nodes sampled so far.
    pub fn nodes_sampled(&self) -> usize {
        self.memo.len()
    }

    fn node(&self, beta: f64, gamma: f64) -> Result<Arc<EmpiricalDistribution>> {
        let params = CirParams::new(beta, gamma, self.steps)?;
        self.memo.get(params, self.draws, self.seed)
    }
}

impl GridLimitSampler {
    fn interpolate_gamma(&self, beta: f64, gamma: f64, levels: &[f64]) -> Result<Vec<f64>> {
        let (lo, hi) = self.bracket(gamma);
        let d_lo = self.node(beta, lo)?;
        if hi <= lo || gamma == lo {
            return levels.iter().map(|&z| d_lo.quantile(z)).collect();
        }
        let d_hi = self.node(beta, hi)?;
        let w = (gamma - lo) / (hi - lo);
        levels
            .iter()
            .map(|&z| Ok((1.0 - w) * d_lo.quantile(z)? + w * d_hi.quantile(z)?))
            .collect()
    }
}

impl LimitProvider for GridLimitSampler {
    fn quantiles(&self, beta: f64, gamma: f64, levels: &[f64]) -> Result<Vec<f64>> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid(format!("gamma must be non-negative, got {gamma}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::invalid(format!("beta must be positive, got {beta}")));
        }
        let (b_lo, b_hi) = self.beta_bracket(beta);
        let q_lo = self.interpolate_gamma(b_lo, gamma, levels)?;
        if b_hi <= b_lo || beta == b_lo {
            return Ok(q_lo);
        }
        let q_hi = self.interpolate_gamma(b_hi, gamma, levels)?;
        let w = (beta - b_lo) / (b_hi - b_lo);
        Ok(q_lo
            .iter()
            .zip(&q_hi)
            .map(|(a, b)| (1.0 - w) * a + w * b)
            .collect())
    }
}
