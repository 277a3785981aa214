//! The square-root (CIR) diffusion `dX = (beta - gamma X) dt + sqrt(X) dB`
//! on `[0, 1]` and Monte Carlo draws of the limit law
//!
//! ```text
//! D_gamma = ∫ X^{3/2} dB / ∫ X^2 dt
//! ```
//!
//! of `n (alpha_hat - alpha_n)`. Paths use Euler–Maruyama with full
//! truncation; the stochastic integral is the left-point (Itô) sum over the
//! same Gaussian increments that drove the path.

mod provider;
mod table;

pub use provider::{DirectLimitSampler, GridLimitSampler, LimitProvider};
pub use table::{level_key, CriticalValueTable, STANDARD_LEVELS};

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infer::{EmpiricalDistribution, Provenance};
use crate::simulate::RngStream;

pub const DEFAULT_STEPS: usize = 5000;
pub const DEFAULT_DRAWS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirParams {
    pub beta: f64,
    pub gamma: f64,
    pub steps: usize,
    pub x0: f64,
}

impl CirParams {
    pub fn new(beta: f64, gamma: f64, steps: usize) -> Result<Self> {
        let params = Self {
            beta,
            gamma,
            steps,
            x0: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_x0(mut self, x0: f64) -> Result<Self> {
        self.x0 = x0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::invalid(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        if self.steps < 2 {
            return Err(Error::invalid(format!("steps must be >= 2, got {}", self.steps)));
        }
        if !(self.x0.is_finite() && self.x0 >= 0.0) {
            return Err(Error::invalid(format!("x0 must be non-negative, got {}", self.x0)));
        }
        Ok(())
    }

    fn dt(&self) -> f64 {
        1.0 / self.steps as f64
    }
}

/// Grid values `X_0..X_M` at `t_i = i / M` together with the increments
/// `dB_i = B(t_{i+1}) - B(t_i)` that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CirPath {
    pub values: Vec<f64>,
    pub increments: Vec<f64>,
    pub dt: f64,
}

impl CirPath {
    /// Build a path by running the scheme over caller-supplied increments.
    pub fn from_increments(params: &CirParams, increments: Vec<f64>) -> Result<Self> {
        params.validate()?;
        if increments.len() != params.steps {
            return Err(Error::invalid(format!(
                "expected {} increments, got {}",
                params.steps,
                increments.len()
            )));
        }
        let dt = params.dt();
        let mut values = Vec::with_capacity(params.steps + 1);
        let mut x = params.x0;
        values.push(x);
        for &db in &increments {
            x = euler_step(x, db, params.beta, params.gamma, dt);
            values.push(x);
        }
        Ok(Self {
            values,
            increments,
            dt,
        })
    }
}

#[inline(always)]
fn euler_step(x: f64, db: f64, beta: f64, gamma: f64, dt: f64) -> f64 {
    let xp = x.max(0.0);
    (x + (beta - gamma * xp) * dt + xp.sqrt() * db).max(0.0)
}

pub fn simulate_cir(params: &CirParams, rng: &mut RngStream) -> Result<CirPath> {
    params.validate()?;
    let sqrt_dt = params.dt().sqrt();
    let increments: Vec<f64> = (0..params.steps)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            sqrt_dt * z
        })
        .collect();
    CirPath::from_increments(params, increments)
}

/// Left-point Itô sum over Riemann sum: `Σ X_i^{3/2} dB_i / Σ X_i^2 dt`.
pub fn limit_functional(path: &CirPath) -> Result<f64> {
    if path.increments.is_empty() || path.values.len() != path.increments.len() + 1 {
        return Err(Error::invalid("path must carry one increment per grid step"));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &db) in path.values.iter().zip(&path.increments) {
        let xp = x.max(0.0);
        num += xp * xp.sqrt() * db;
        den += xp * xp * path.dt;
    }
    if den <= 0.0 {
        return Err(Error::DegeneratePath);
    }
    Ok(num / den)
}

/// One draw of `D_gamma` without materializing the path. Bit-identical to
/// `limit_functional(&simulate_cir(params, rng)?)`.
pub fn limit_draw(params: &CirParams, rng: &mut RngStream) -> Result<f64> {
    let dt = params.dt();
    let sqrt_dt = dt.sqrt();
    let (beta, gamma) = (params.beta, params.gamma);
    let mut x = params.x0;
    let mut num = 0.0;
    let mut den = 0.0;
    for _ in 0..params.steps {
        let z: f64 = StandardNormal.sample(rng);
        let db = sqrt_dt * z;
        let xp = x.max(0.0);
        let root = xp.sqrt();
        num += xp * root * db;
        den += xp * xp * dt;
        x = (x + (beta - gamma * xp) * dt + root * db).max(0.0);
    }
    if den <= 0.0 {
        return Err(Error::DegeneratePath);
    }
    Ok(num / den)
}

/// `draws` independent draws of `D_gamma`; draw `i` runs on stream
/// `(seed, i)`, so the result does not depend on the thread count.
pub fn sample_limit(params: &CirParams, draws: usize, seed: u64) -> Result<EmpiricalDistribution> {
    params.validate()?;
    if draws == 0 {
        return Err(Error::invalid("draws must be at least 1"));
    }
    let sample = (0..draws as u64)
        .into_par_iter()
        .map(|i| limit_draw(params, &mut RngStream::new(seed, i)))
        .collect::<Result<Vec<f64>>>()?;
    EmpiricalDistribution::with_provenance(
        sample,
        Provenance {
            beta: params.beta,
            gamma: params.gamma,
            steps: params.steps,
            draws,
            seed,
        },
    )
}
