//! Estimate records and their JSON/CSV serializations.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::estimate::EstimateOptions;
use crate::braid::LinkingMatrix;

/// Bumped whenever a serialized field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Theta1,
    Theta2,
    Calabi,
    Growth,
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theta1" => Ok(Kind::Theta1),
            "theta2" => Ok(Kind::Theta2),
            "calabi" => Ok(Kind::Calabi),
            "growth" => Ok(Kind::Growth),
            other => Err(format!("unknown kind {other:?}")),
        }
    }
}

/// One row of the per-N table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerN {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    /// Running minimum of `mean` up to this N.
    pub inf_track: f64,
    /// Mean of the lower bound track, for `θ₁`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_mean: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    count: usize,
}

/// Spread between the `θ₁` bound tracks at the largest N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub mean: f64,
    pub max: f64,
}

/// Linking numbers per iterate for deterministic (all-Dirac) inputs, in the
/// two usual normalizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkingReport {
    /// `lk(i, j) / N`: one full relative turn counts 1.
    pub linking_per_iterate: Vec<Vec<f64>>,
    /// `2 lk(i, j) / N`: signed crossings, one generator counts 1.
    pub crossings_per_iterate: Vec<Vec<f64>>,
}

impl LinkingReport {
    pub fn per_iterate(lk: &LinkingMatrix, n_iter: usize) -> Self {
        let scale = |f: f64| -> Vec<Vec<f64>> {
            lk.rows()
                .iter()
                .map(|r| r.iter().map(|&v| f * v as f64 / n_iter as f64).collect())
                .collect()
        };
        LinkingReport {
            linking_per_iterate: scale(1.0),
            crossings_per_iterate: scale(2.0),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub omega_rejections: u64,
    pub degenerate_rejections: u64,
    pub dynnikov_fallbacks: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_gap: Option<GapStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linking: Option<LinkingReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub(crate) fn record_resolution(&mut self, r: usize) {
        let s = self.resolution.get_or_insert(ResolutionStats {
            min: r,
            max: r,
            mean: 0.0,
            count: 0,
        });
        s.min = s.min.min(r);
        s.max = s.max.max(r);
        s.mean = (s.mean * s.count as f64 + r as f64) / (s.count + 1) as f64;
        s.count += 1;
    }

    pub(crate) fn record_gaps(&mut self, upper: &[Vec<f64>], lower: &[Vec<f64>]) {
        let (Some(u), Some(l)) = (upper.last(), lower.last()) else {
            return;
        };
        let gaps: Vec<f64> = u.iter().zip(l).map(|(a, b)| a - b).collect();
        if gaps.is_empty() {
            return;
        }
        self.bound_gap = Some(GapStats {
            mean: gaps.iter().sum::<f64>() / gaps.len() as f64,
            max: gaps.iter().copied().fold(0.0, f64::max),
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantEstimate {
    pub schema_version: u32,
    pub kind: Kind,
    pub per_n: Vec<PerN>,
    /// Mean at the largest N.
    pub point_estimate: f64,
    /// Minimum of the per-N means.
    pub inf_estimate: f64,
    pub samples: usize,
    pub seed: u64,
    pub diagnostics: Diagnostics,
}

/// Mean and standard error, summed in index order.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Builds an estimate from per-N sample columns of normalized values.
pub(crate) fn summarize(
    kind: Kind,
    schedule: &[usize],
    values: &[Vec<f64>],
    lower: Option<&[Vec<f64>]>,
    opts: &EstimateOptions,
    diagnostics: Diagnostics,
) -> InvariantEstimate {
    let mut per_n = Vec::with_capacity(schedule.len());
    let mut inf = f64::INFINITY;
    for (j, &n) in schedule.iter().enumerate() {
        let (mean, stderr) = mean_stderr(&values[j]);
        inf = inf.min(mean);
        per_n.push(PerN {
            n,
            mean,
            stderr,
            inf_track: inf,
            lower_mean: lower.map(|l| mean_stderr(&l[j]).0),
        });
    }
    InvariantEstimate {
        schema_version: SCHEMA_VERSION,
        kind,
        point_estimate: per_n.last().map_or(0.0, |r| r.mean),
        inf_estimate: if inf.is_finite() { inf } else { 0.0 },
        per_n,
        samples: opts.samples,
        seed: opts.seed,
        diagnostics,
    }
}

impl InvariantEstimate {
    pub fn final_stderr(&self) -> f64 {
        self.per_n.last().map_or(0.0, |r| r.stderr)
    }

    /// The per-N table as CSV: `N,mean,stderr,inf_track` plus `lower_mean`
    /// when present.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let with_lower = self.per_n.iter().any(|r| r.lower_mean.is_some());
        if with_lower {
            writeln!(w, "N,mean,stderr,inf_track,lower_mean")?;
        } else {
            writeln!(w, "N,mean,stderr,inf_track")?;
        }
        for r in &self.per_n {
            write!(w, "{},{},{},{}", r.n, r.mean, r.stderr, r.inf_track)?;
            if let Some(l) = r.lower_mean.filter(|_| with_lower) {
                write!(w, ",{l}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_error() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn csv_projection() {
        let e = summarize(
            Kind::Theta1,
            &[1, 2],
            &[vec![2.0, 4.0], vec![1.5, 2.5]],
            Some(&[vec![1.0, 1.0], vec![1.0, 1.0]]),
            &EstimateOptions::default(),
            Diagnostics::default(),
        );
        assert_eq!(e.point_estimate, 2.0);
        assert_eq!(e.inf_estimate, 2.0);
        let mut out = Vec::new();
        e.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("N,mean,stderr,inf_track,lower_mean"));
        assert_eq!(text.lines().nth(1), Some("1,3,1,3,1"));
    }
}
