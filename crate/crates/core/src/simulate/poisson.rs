//! Exact Poisson variates for any finite mean.
//!
//! Small means (< 10) use sequential inversion. Larger means use the
//! transformed rejection with squeeze of Hörmann (PTRS), whose acceptance
//! step compares against the exact log-pmf. The log-pmf is evaluated with
//! Loader's saddle-point form so that it stays accurate at means around 1e9,
//! where the naive `k ln(lambda) - lambda - ln k!` cancels badly.

use std::f64::consts::PI;

use super::rng::RngStream;
use crate::error::{Error, Result};

const INVERSION_LIMIT: f64 = 10.0;

pub fn poisson_draw(lambda: f64, rng: &mut RngStream) -> Result<u64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::invalid(format!(
            "Poisson mean must be finite and non-negative, got {lambda}"
        )));
    }
    Ok(if lambda == 0.0 {
        0
    } else if lambda < INVERSION_LIMIT {
        inversion(lambda, rng)
    } else {
        ptrs(lambda, rng)
    })
}

fn inversion(lambda: f64, rng: &mut RngStream) -> u64 {
    let u = rng.uniform_open();
    let mut k = 0u64;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= lambda / k as f64;
        if p == 0.0 {
            break;
        }
        cdf += p;
    }
    k
}

fn ptrs(lambda: f64, rng: &mut RngStream) -> u64 {
    let slam = lambda.sqrt();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.uniform_open() - 0.5;
        let v = rng.uniform_open();
        let us = 0.5 - u.abs();
        let kf = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return kf as u64;
        }
        if kf < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        if lhs <= ln_pmf(kf as u64, lambda) {
            return kf as u64;
        }
    }
}

/// `ln P(K = k)` for `K ~ Poisson(lambda)`, `lambda > 0`.
pub fn ln_pmf(k: u64, lambda: f64) -> f64 {
    if k == 0 {
        return -lambda;
    }
    let kf = k as f64;
    -0.5 * (2.0 * PI * kf).ln() - stirling_error(k) - deviance_term(kf, lambda)
}

/// `ln k! - ln(sqrt(2 pi k) (k/e)^k)`.
fn stirling_error(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let n = k as f64;
    if k <= 15 {
        let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
        return ln_fact - (n + 0.5) * n.ln() + n - 0.5 * (2.0 * PI).ln();
    }
    let nn = n * n;
    if k > 500 {
        (S0 - S1 / nn) / n
    } else if k > 80 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if k > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// `x ln(x / mu) + mu - x`, computed by series when `x ≈ mu`.
fn deviance_term(x: f64, mu: f64) -> f64 {
    if (x - mu).abs() < 0.1 * (x + mu) {
        let v = (x - mu) / (x + mu);
        let mut s = (x - mu) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / mu).ln() + mu - x
    }
}
