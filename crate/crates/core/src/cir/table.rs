//! JSON persistence of `D_gamma` critical values.
//!
//! ```json
//! {"beta": 1.0, "gamma": 0.0, "steps": 5000, "draws": 100000, "seed": 7,
//!  "quantiles": {"0.05": -5.43, ...}, "sample": [...]}
//! ```
//!
//! `quantiles` maps a level (shortest round-trip decimal) to its value. The
//! sorted `sample` is optional and, when present, gives exact p-values.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infer::{EmpiricalDistribution, Provenance};

pub const STANDARD_LEVELS: [f64; 11] = [
    0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975, 0.99,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub beta: f64,
    pub gamma: f64,
    pub steps: usize,
    pub draws: usize,
    pub seed: u64,
    pub quantiles: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<Vec<f64>>,
}

impl CriticalValueTable {
    pub fn from_distribution(
        dist: &EmpiricalDistribution,
        levels: &[f64],
        keep_sample: bool,
    ) -> Result<Self> {
        let prov = dist
            .provenance()
            .ok_or_else(|| Error::invalid("distribution has no provenance metadata"))?;
        let quantiles = levels
            .iter()
            .map(|&z| Ok((level_key(z), dist.quantile(z)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self {
            beta: prov.beta,
            gamma: prov.gamma,
            steps: prov.steps,
            draws: prov.draws,
            seed: prov.seed,
            quantiles,
            sample: keep_sample.then(|| dist.sample().to_vec()),
        })
    }

    pub fn quantile(&self, level: f64) -> Option<f64> {
        self.quantiles.get(&level_key(level)).copied()
    }

    /// Rebuild the distribution; requires the stored sample.
    pub fn to_distribution(&self) -> Result<EmpiricalDistribution> {
        let sample = self.sample.clone().ok_or_else(|| {
            Error::invalid("critical-value table was written without its sample")
        })?;
        EmpiricalDistribution::with_provenance(
            sample,
            Provenance {
                beta: self.beta,
                gamma: self.gamma,
                steps: self.steps,
                draws: self.draws,
                seed: self.seed,
            },
        )
    }

    /// Reject a table built for a different model.
    pub fn check_matches(&self, beta: f64, gamma: f64) -> Result<()> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        if !close(self.beta, beta) {
            return Err(Error::ProvenanceMismatch(format!(
                "table was built with beta = {}, requested beta = {beta}",
                self.beta
            )));
        }
        if !close(self.gamma, gamma) {
            return Err(Error::ProvenanceMismatch(format!(
                "table was built with gamma = {}, requested gamma = {gamma}",
                self.gamma
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serialization is infallible");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}

pub fn level_key(level: f64) -> String {
    format!("{level}")
}
