//! Summaries of Monte Carlo output: binomial intervals, kernel density
//! curves, qq pairs and the two-sample Kolmogorov–Smirnov distance.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infer::EmpiricalDistribution;

pub const KDE_GRID_POINTS: usize = 512;

/// Wilson score interval for a binomial proportion at normal quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lower = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let upper = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lower, upper)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub bandwidth: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

impl DensityCurve {
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.grid.iter().copied().zip(self.density.iter().copied()).collect()
    }

    /// Trapezoid-rule integral over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

/// Silverman's rule of thumb `1.06 sd len^{-1/5}`.
pub fn silverman_bandwidth(sample: &[f64]) -> Result<f64> {
    if sample.len() < 2 {
        return Err(Error::invalid("automatic bandwidth needs at least two values"));
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let h = 1.06 * var.sqrt() * n.powf(-0.2);
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("automatic bandwidth is zero for a constant sample"));
    }
    Ok(h)
}

/// Gaussian kernel density estimate on `points` evenly spaced values
/// spanning `[min - 3h, max + 3h]`. `bandwidth = None` uses Silverman's rule.
pub fn kde(sample: &[f64], bandwidth: Option<f64>, points: usize) -> Result<DensityCurve> {
    if sample.is_empty() {
        return Err(Error::invalid("density estimate needs a non-empty sample"));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("sample contains non-finite values"));
    }
    if points < 2 {
        return Err(Error::invalid("density grid needs at least two points"));
    }
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(Error::invalid(format!("bandwidth must be positive, got {h}"))),
        None => silverman_bandwidth(sample)?,
    };
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
    let norm = 1.0 / (sample.len() as f64 * h * (2.0 * PI).sqrt());
    let density = grid
        .iter()
        .map(|&x| {
            norm * sample
                .iter()
                .map(|&s| {
                    let u = (x - s) / h;
                    (-0.5 * u * u).exp()
                })
                .sum::<f64>()
        })
        .collect();
    Ok(DensityCurve {
        bandwidth: h,
        grid,
        density,
    })
}

/// Pairs `(reference quantile at p_i, i-th order statistic of sample)` with
/// plotting positions `p_i = (i - 0.5) / len`.
pub fn qq_pairs(sample: &[f64], reference: &EmpiricalDistribution) -> Result<Vec<(f64, f64)>> {
    if sample.is_empty() {
        return Err(Error::invalid("qq pairs need a non-empty sample"));
    }
    let sorted = EmpiricalDistribution::new(sample.to_vec())?;
    let len = sorted.len() as f64;
    sorted
        .sample()
        .iter()
        .enumerate()
        .map(|(i, &y)| Ok((reference.quantile((i as f64 + 0.5) / len)?, y)))
        .collect()
}

/// Two-sample Kolmogorov–Smirnov distance `sup |F_a - F_b|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = EmpiricalDistribution::new(a.to_vec())?;
    let b = EmpiricalDistribution::new(b.to_vec())?;
    let (a, b) = (a.sample(), b.sample());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}
