//! Conditional least squares for `alpha` with `beta` known, and conditional
//! maximum likelihood for `beta` (optionally jointly with `alpha`).
//!
//! Both estimators use the terms `t = 2..=n` of a series `(X_0, ..., X_n)`,
//! i.e. `X_1` is the first lagged value and `X_0` does not enter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::CountSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClsFit {
    pub alpha_hat: f64,
    pub n: usize,
    pub beta_assumed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmlFit {
    pub beta_hat: f64,
    pub alpha_hat: f64,
    pub loglik: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmlMode {
    /// Maximize over `beta > 0` and `alpha ∈ [0, 1]`.
    Joint,
    /// Maximize over `beta` with `alpha` held fixed.
    BetaOnly { alpha: f64 },
}

/// `alpha_hat = Σ X_{t-1} (X_t - beta) / Σ X_{t-1}^2`.
pub fn cls_alpha(series: &CountSeries, beta: f64) -> Result<ClsFit> {
    check_beta(beta)?;
    series.require_len(3)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (prev, cur) in series.regression_pairs() {
        num += prev * (cur - beta);
        den += prev * prev;
    }
    if den == 0.0 {
        return Err(Error::ZeroPredictors);
    }
    Ok(ClsFit {
        alpha_hat: num / den,
        n: series.n(),
        beta_assumed: beta,
    })
}

/// `λ_t = beta + alpha X_{t-1}` for `t = 1..=n`; element `t - 1` predicts `X_t`.
pub fn predicted_means(series: &CountSeries, beta: f64, alpha: f64) -> Result<Vec<f64>> {
    series.require_len(2)?;
    Ok(series.values[..series.len() - 1]
        .iter()
        .map(|&x| beta + alpha * x as f64)
        .collect())
}

const LAMBDA_FLOOR: f64 = 1e-300;
const PARAM_TOL: f64 = 1e-10;
const BETA_FLOOR: f64 = 1e-12;
const MAX_NEWTON: usize = 200;

/// Poisson conditional log-likelihood `Σ_{t=2}^n (X_t log λ_t - λ_t)`, up to
/// the constant `-Σ log X_t!`.
pub fn cml_loglik(series: &CountSeries, beta: f64, alpha: f64) -> f64 {
    let mut ll = 0.0;
    for (prev, cur) in series.regression_pairs() {
        let lambda = beta + alpha * prev;
        if cur > 0.0 {
            if lambda <= LAMBDA_FLOOR {
                return f64::NEG_INFINITY;
            }
            ll += cur * lambda.ln();
        }
        ll -= lambda;
    }
    ll
}

pub fn cml_fit(series: &CountSeries, mode: CmlMode) -> Result<CmlFit> {
    series.require_len(3)?;
    if !series.regression_pairs().any(|(_, cur)| cur > 0.0) {
        return Err(Error::invalid(
            "likelihood has no interior maximum: all responses are zero",
        ));
    }
    match mode {
        CmlMode::BetaOnly { alpha } => {
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(Error::invalid(format!("alpha must be non-negative, got {alpha}")));
            }
            let beta_hat = profile_beta(series, alpha)?;
            Ok(CmlFit {
                beta_hat,
                alpha_hat: alpha,
                loglik: cml_loglik(series, beta_hat, alpha),
            })
        }
        CmlMode::Joint => joint_fit(series),
    }
}

/// Maximizer in `beta` at fixed `alpha`: the root of the decreasing score
/// `Σ X_t / λ_t - (n - 1)`, located by Newton steps kept inside a bracket.
fn profile_beta(series: &CountSeries, alpha: f64) -> Result<f64> {
    let m = series.regression_pairs().count() as f64;
    let total: f64 = series.regression_pairs().map(|(_, cur)| cur).sum();
    let score = |beta: f64| -> (f64, f64) {
        let (mut s, mut h) = (0.0, 0.0);
        for (prev, cur) in series.regression_pairs() {
            if cur > 0.0 {
                let lambda = beta + alpha * prev;
                s += cur / lambda;
                h -= cur / (lambda * lambda);
            }
        }
        (s - m, h)
    };

    // λ_t ≥ beta, so the score is at most total/beta - m: the root is below total/m.
    let mut hi = total / m;
    if score(hi).0 >= 0.0 {
        return Ok(hi);
    }
    let mut lo = BETA_FLOOR;
    if score(lo).0 <= 0.0 {
        return Ok(lo);
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let (s, h) = score(beta);
        if s > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let mut next = beta - s / h;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - beta).abs() <= PARAM_TOL * beta.max(1.0) || hi - lo <= PARAM_TOL * hi.max(1.0) {
            return Ok(next);
        }
        beta = next;
    }
    Err(Error::NonConvergence(format!(
        "profile likelihood in beta at alpha = {alpha} did not converge in {MAX_NEWTON} steps"
    )))
}

/// Golden-section search over `alpha ∈ [0, 1]` of the profile likelihood,
/// which is concave because the log-likelihood is jointly concave.
fn joint_fit(series: &CountSeries) -> Result<CmlFit> {
    let profile = |alpha: f64| -> Result<(f64, f64)> {
        let beta = profile_beta(series, alpha)?;
        Ok((cml_loglik(series, beta, alpha), beta))
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = profile(c)?.0;
    let mut fd = profile(d)?.0;
    let mut iterations = 0;
    while b - a > 1e-9 {
        iterations += 1;
        if iterations > 200 {
            return Err(Error::NonConvergence("golden-section search over alpha".into()));
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = profile(c)?.0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = profile(d)?.0;
        }
    }
    let mut best_alpha = 0.5 * (a + b);
    let (mut best_ll, mut best_beta) = profile(best_alpha)?;
    for edge in [0.0, 1.0] {
        let (ll, beta) = profile(edge)?;
        if ll > best_ll {
            best_alpha = edge;
            best_ll = ll;
            best_beta = beta;
        }
    }
    Ok(CmlFit {
        beta_hat: best_beta,
        alpha_hat: best_alpha,
        loglik: best_ll,
    })
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}
