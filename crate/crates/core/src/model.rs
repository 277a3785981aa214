//! Closed-form moments of the Poisson INARCH(1) process and the limiting
//! quantities used by the asymptotic theory.
//!
//! Every function here is pure. Moment formulas take the starting value
//! `kappa` into account; with `kappa = 0` they reduce to the textbook
//! expressions `E(X_t) = beta (1 - alpha^t) / (1 - alpha)` and
//! `Var(X_t) = beta / (1 - alpha) * {(1 - alpha^2t) / (1 - alpha^2) - alpha^t (1 - alpha^t) / (1 - alpha)}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of `X_t | past ~ Poisson(beta + alpha * X_{t-1})` with `X_0 = kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InarchParams {
    pub beta: f64,
    pub alpha: f64,
    pub kappa: u64,
}

impl InarchParams {
    pub fn new(beta: f64, alpha: f64, kappa: u64) -> Result<Self> {
        let params = Self { beta, alpha, kappa };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn is_stationary(&self) -> bool {
        self.alpha < 1.0
    }
}

/// A point on the nearly unstable parameter path `alpha_n = 1 - gamma / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearlyUnstableSpec {
    pub beta: f64,
    pub gamma: f64,
    pub n: usize,
}

impl NearlyUnstableSpec {
    pub fn new(beta: f64, gamma: f64, n: usize) -> Result<Self> {
        let spec = Self { beta, gamma, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid(format!("beta must be positive, got {}", self.beta)));
        }
        if self.n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::invalid(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        if self.gamma > self.n as f64 {
            return Err(Error::invalid(format!(
                "gamma = {} exceeds n = {}; alpha_n would be negative",
                self.gamma, self.n
            )));
        }
        Ok(())
    }

    pub fn alpha_n(&self) -> f64 {
        1.0 - self.gamma / self.n as f64
    }

    pub fn params(&self, kappa: u64) -> InarchParams {
        InarchParams {
            beta: self.beta,
            alpha: self.alpha_n(),
            kappa,
        }
    }
}

/// `1 - alpha^m` without cancellation for alpha near one.
fn one_minus_pow(alpha: f64, m: u64) -> f64 {
    if m == 0 {
        0.0
    } else if alpha == 0.0 {
        1.0
    } else {
        -((m as f64) * (alpha - 1.0).ln_1p()).exp_m1()
    }
}

fn pow(alpha: f64, m: u64) -> f64 {
    1.0 - one_minus_pow(alpha, m)
}

/// `E(X_t)` for a process started at `X_0 = kappa`.
pub fn marginal_mean(params: &InarchParams, t: u64) -> f64 {
    let kappa = params.kappa as f64;
    let alpha = params.alpha;
    if t == 0 {
        return kappa;
    }
    if alpha == 1.0 {
        return params.beta * t as f64 + kappa;
    }
    params.beta * one_minus_pow(alpha, t) / (1.0 - alpha) + pow(alpha, t) * kappa
}

/// `Var(X_t)` for a process started at `X_0 = kappa`.
///
/// For `kappa = 0` this is the closed form above, rearranged as
/// `beta (1 - a^t)(1 - a^{t+1}) / ((1 - a)^2 (1 + a))`, which is the same
/// expression with the braces factored. A nonzero start adds
/// `kappa a^t (1 - a^t) / (1 - a)`.
pub fn marginal_var(params: &InarchParams, t: u64) -> f64 {
    if t == 0 {
        return 0.0;
    }
    let beta = params.beta;
    let kappa = params.kappa as f64;
    let a = params.alpha;
    let tf = t as f64;
    if a == 1.0 {
        return beta * tf + beta * tf * (tf - 1.0) / 2.0 + kappa * tf;
    }
    let one_minus_at = one_minus_pow(a, t);
    let one_minus_at1 = one_minus_pow(a, t + 1);
    let base = beta * one_minus_at * one_minus_at1 / ((1.0 - a) * (1.0 - a) * (1.0 + a));
    base + kappa * pow(a, t) * one_minus_at / (1.0 - a)
}

/// `Var(X_t)` exactly as printed for a zero start, without the factoring.
/// Kept for cross-checking `marginal_var` against the published grouping.
pub fn marginal_var_printed(beta: f64, alpha: f64, t: u64) -> f64 {
    let a = alpha;
    let at = a.powf(t as f64);
    beta / (1.0 - a) * ((1.0 - at * at) / (1.0 - a * a) - at * (1.0 - at) / (1.0 - a))
}

/// `cov(X_{t+k}, X_t) = alpha^k Var(X_t)`.
pub fn autocov(params: &InarchParams, t: u64, k: u64) -> f64 {
    pow(params.alpha, k) * marginal_var(params, t)
}

/// Limiting covariance kernel `C_W(s ∧ v) = beta gamma^-2 (gamma u + e^{-gamma u} - 1)`
/// of the rescaled martingale `W^(n)(s) / n`.
pub fn w_cov_limit(beta: f64, gamma: f64, s: f64, v: f64) -> f64 {
    let u = s.min(v);
    let x = gamma * u;
    // x + e^{-x} - 1 loses everything to cancellation for small x; use the series there.
    let core = if x.abs() < 1e-3 {
        x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)))
    } else {
        x + (-x).exp_m1()
    };
    beta * core / (gamma * gamma)
}

/// Leading coefficient of `E(X_{floor(nt)}) ≈ n beta gamma^-1 (1 - e^{-gamma t})`,
/// which is also the mean of the limiting diffusion at time `t`.
pub fn limiting_mean_scale(spec: &NearlyUnstableSpec, t: f64) -> f64 {
    cir_mean(spec.beta, spec.gamma, 0.0, t)
}

/// Mean of the square-root diffusion `dX = (beta - gamma X) dt + sqrt(X) dB`
/// started at `x0`: the solution of `m' = beta - gamma m`.
pub fn cir_mean(beta: f64, gamma: f64, x0: f64, t: f64) -> f64 {
    if gamma == 0.0 {
        return x0 + beta * t;
    }
    let decay = (-gamma * t).exp();
    x0 * decay - beta * (-gamma * t).exp_m1() / gamma
}

/// Asymptotic variance of `sqrt(n) (alpha_hat - alpha)` for a stationary
/// Poisson INARCH(1), evaluated term by term in the published grouping:
///
/// ```text
/// (1-a)(1-a^2) / (1+b(1+a))^2 * { 1 + b(1-a) + a(2+1/b)/(1-a)
///                                 - a^2 (1-a) / b / (1-a^3) + (1+b(1+a))/(1-a) }
/// ```
///
/// See [`stationary_cls_avar_moments`] for the same quantity computed from
/// the stationary moments; the two differ by the leading `1 + b(1-a)` term.
pub fn stationary_cls_avar(beta: f64, alpha: f64) -> Result<f64> {
    check_stationary(beta, alpha)?;
    let a = alpha;
    let b = beta;
    let prefactor = (1.0 - a) * (1.0 - a * a) / (1.0 + b * (1.0 + a)).powi(2);
    let term1 = 1.0 + b * (1.0 - a);
    let term2 = a * (2.0 + 1.0 / b) / (1.0 - a);
    let term3 = a * a * (1.0 - a) / b / (1.0 - a * a * a);
    let term4 = (1.0 + b * (1.0 + a)) / (1.0 - a);
    Ok(prefactor * (term1 + term2 - term3 + term4))
}

/// `R / U^2` with `U = E(X^2)` and `R = beta E(X^2) + alpha E(X^3)`, using the
/// exact stationary moments of the process. This is the sandwich variance of
/// the least-squares estimator.
pub fn stationary_cls_avar_moments(beta: f64, alpha: f64) -> Result<f64> {
    check_stationary(beta, alpha)?;
    let (_, m2, m3) = stationary_raw_moments(beta, alpha);
    Ok((beta * m2 + alpha * m3) / (m2 * m2))
}

/// First three raw moments of the stationary law, from
/// `E(X^k) = E(E(X^k | lambda))` with `lambda = beta + alpha X_{-1}`.
pub fn stationary_raw_moments(beta: f64, alpha: f64) -> (f64, f64, f64) {
    let (b, a) = (beta, alpha);
    let m1 = b / (1.0 - a);
    // E(X^2) = E(lambda^2) + E(lambda)
    let m2 = (b * b + 2.0 * a * b * m1 + m1) / (1.0 - a * a);
    let el2 = b * b + 2.0 * a * b * m1 + a * a * m2;
    // E(X^3) = E(lambda^3) + 3 E(lambda^2) + E(lambda)
    let m3 = (b * b * b + 3.0 * b * b * a * m1 + 3.0 * b * a * a * m2 + 3.0 * el2 + m1)
        / (1.0 - a * a * a);
    (m1, m2, m3)
}

fn check_stationary(beta: f64, alpha: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::invalid(format!("alpha must be in [0, 1), got {alpha}")));
    }
    if alpha >= 1.0 {
        return Err(Error::NonStationary(alpha));
    }
    Ok(())
}
