//! JSON experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::disk::{MapSpec, MeasureSpec};
use crate::error::{Error, Result};
use crate::free_group::DEFAULT_LENGTH_CAP;
use crate::invariants::{EstimateOptions, Kind, StretchOptions};

fn default_n_max() -> usize {
    64
}

fn default_samples() -> usize {
    64
}

fn default_resolution() -> usize {
    4
}

fn default_max_resolution() -> usize {
    1024
}

fn default_length_cap() -> usize {
    DEFAULT_LENGTH_CAP
}

/// One experiment, as read from a config file. See `schema/experiment.schema.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Number of points; must equal `measures.len()`.
    pub n: usize,
    #[serde(default)]
    pub map: MapSpec,
    pub measures: Vec<MeasureSpec>,
    /// Further measure tuples of the same size; `theta` reports the maximum
    /// over all families as the family-sup.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_families: Vec<Vec<MeasureSpec>>,
    /// Mandatory: there is no clock-derived default.
    pub seed: u64,
    #[serde(default = "default_n_max", rename = "N_max", alias = "n_max")]
    pub n_max: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kinds: Vec<Kind>,
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_max_resolution")]
    pub max_resolution: usize,
    /// Direction of the base diameter in radians.
    #[serde(default)]
    pub base_angle: f64,
    #[serde(default = "default_length_cap")]
    pub length_cap: usize,
    /// Conjugating map for `invariance-check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stretch: Option<StretchOptions>,
    /// Output directory, overridden by `--out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
            Error::Invalid(format!("line {}, column {}: {msg}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Invalid(msg) => Error::Invalid(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.measures.len() != self.n {
            return Err(Error::Invalid(format!(
                "n = {} but {} measures given",
                self.n,
                self.measures.len()
            )));
        }
        if let Some(f) = self.extra_families.iter().find(|f| f.len() != self.n) {
            return Err(Error::Invalid(format!(
                "every measure family needs {} measures, found {}",
                self.n,
                f.len()
            )));
        }
        if self.n == 0 || self.n_max == 0 || self.samples == 0 || self.resolution == 0 {
            return Err(Error::Invalid(
                "n, N_max, samples and resolution must be positive".into(),
            ));
        }
        self.map.validate()?;
        if let Some(h) = &self.conjugator {
            h.validate()?;
        }
        for ms in self.measures.iter().chain(self.extra_families.iter().flatten()) {
            ms.validate()?;
        }
        Ok(())
    }

    pub fn estimate_options(&self) -> EstimateOptions {
        EstimateOptions {
            n_max: self.n_max,
            samples: self.samples,
            seed: self.seed,
            workers: self.workers,
            resolution: self.resolution,
            max_resolution: self.max_resolution,
            base_angle: self.base_angle,
            length_cap: self.length_cap,
        }
    }
}
