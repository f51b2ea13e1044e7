//! Monte Carlo Calabi invariant `∬ Ang_φ dλ₁ dλ₂`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ang::ang_birkhoff;
use super::estimate::{doubling_schedule, draw_and_extract, pool, EstimateOptions, Sampler};
use super::report::{summarize, Diagnostics, InvariantEstimate, Kind};
use crate::braid::theta1_bounds;
use crate::disk::{MapSpec, MeasureSpec};
use crate::error::{Error, Result};
use crate::extraction::orbit;

/// Per-pair comparison of word length and winding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingGap {
    pub pairs: usize,
    pub checked: usize,
    /// Count of `(pair, N)` with `|L(β) − |Ang_{φ^N}|| > 3`.
    pub violations: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalabiReport {
    /// `(1/N) Ang_{φ^N}` averaged over pairs, in half turns.
    pub estimate: InvariantEstimate,
    pub estimate_full_turns: f64,
    /// `L(β(p₁, p₂; φ^N)) / N` over the same pairs.
    pub theta1: InvariantEstimate,
    /// `|𝓒| ≤ Θ^(1)` up to three combined standard errors.
    pub bounded_by_theta1: bool,
    pub winding_gap: WindingGap,
}

struct PairValues {
    ang: Vec<f64>,
    length: Vec<f64>,
    omega: u64,
    degenerate: u64,
    resolution: usize,
}

/// Estimates the Calabi invariant with Birkhoff time averages of length up to
/// `opts.n_max`, alongside the `θ₁` estimate of the same pairs.
pub fn calabi(m: &MapSpec, l1: &MeasureSpec, l2: &MeasureSpec, opts: &EstimateOptions) -> Result<CalabiReport> {
    if opts.samples == 0 || opts.n_max == 0 {
        return Err(Error::Invalid("samples and n_max must be positive".into()));
    }
    m.validate()?;
    let measures = [l1.clone(), l2.clone()];
    let sampler = Sampler::new(m, &measures, None)?;
    let schedule = doubling_schedule(opts.n_max);

    let run = |i: usize| -> Result<PairValues> {
        let drawn = draw_and_extract(m, &sampler, &schedule, opts, i)?;
        let pts = drawn.config.points();
        let pair_orbit: Vec<[_; 2]> = orbit(&drawn.config, m, opts.n_max, sampler.atoms())
            .into_iter()
            .map(|c| [c[0], c[1]])
            .collect();
        debug_assert_eq!(pair_orbit[0], [pts[0], pts[1]]);
        let sums = ang_birkhoff(m, &pair_orbit, opts.resolution)?;
        Ok(PairValues {
            ang: schedule.iter().map(|&n| sums[n - 1]).collect(),
            length: drawn
                .extraction
                .words
                .iter()
                .map(|w| theta1_bounds(w).upper as f64)
                .collect(),
            omega: drawn.omega_rejections,
            degenerate: drawn.degenerate_rejections,
            resolution: drawn.extraction.resolution,
        })
    };
    let results: Vec<Result<PairValues>> =
        pool(opts.workers)?.install(|| (0..opts.samples).into_par_iter().map(run).collect());
    let results: Vec<PairValues> = results.into_iter().collect::<Result<_>>()?;

    let mut diagnostics = Diagnostics::default();
    let mut ang_cols = vec![Vec::with_capacity(results.len()); schedule.len()];
    let mut len_cols = vec![Vec::with_capacity(results.len()); schedule.len()];
    let mut gap = WindingGap {
        pairs: results.len(),
        checked: 0,
        violations: 0,
        max_deviation: 0.0,
    };
    for r in &results {
        diagnostics.omega_rejections += r.omega;
        diagnostics.degenerate_rejections += r.degenerate;
        diagnostics.record_resolution(r.resolution);
        for (j, &n) in schedule.iter().enumerate() {
            ang_cols[j].push(r.ang[j] / n as f64);
            len_cols[j].push(r.length[j] / n as f64);
            let dev = (r.length[j] - r.ang[j].abs()).abs();
            gap.checked += 1;
            gap.max_deviation = gap.max_deviation.max(dev);
            if dev > 3.0 {
                gap.violations += 1;
            }
        }
    }
    diagnostics
        .notes
        .push("Ang in half turns: one exchange counts 1".into());
    let estimate = summarize(Kind::Calabi, &schedule, &ang_cols, None, opts, diagnostics.clone());
    let theta1 = summarize(Kind::Theta1, &schedule, &len_cols, None, opts, diagnostics);
    let tolerance = 3.0 * estimate.final_stderr().hypot(theta1.final_stderr());
    Ok(CalabiReport {
        estimate_full_turns: estimate.point_estimate / 2.0,
        bounded_by_theta1: estimate.point_estimate.abs() <= theta1.point_estimate + tolerance,
        estimate,
        theta1,
        winding_gap: gap,
    })
}
