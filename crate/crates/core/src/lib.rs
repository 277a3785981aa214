//! Simulation and inference for nearly unstable Poisson INARCH(1) count
//! time series: path simulation, the square-root diffusion limit, least
//! squares and likelihood estimation, confidence intervals, a unit-root test
//! with Monte Carlo critical values, and a reproducible experiment harness.

pub mod cir;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod harness;
pub mod infer;
pub mod model;
pub mod simulate;

pub use error::{Error, ErrorKind, Result};
