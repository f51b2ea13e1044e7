//! Monte Carlo estimates of `Θ^(1)` and `Θ^(2)` averaged over configurations
//! drawn from a product of measures.

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{summarize, Diagnostics, InvariantEstimate, Kind, LinkingReport};
use crate::braid::{linking_matrix, theta1_bounds, BraidWord};
use crate::disk::{stream_rng, Configuration, MapSpec, MeasureSpec, Point, ATOM_TOLERANCE};
use crate::dynnikov::log_norm_max;
use crate::error::{Error, Result};
use crate::extraction::{beta_schedule, ExtractOptions, Extraction};
use crate::free_group::{theta2_exact, DEFAULT_LENGTH_CAP};

/// Rejected draws allowed per sample before giving up.
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateOptions {
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide. Never changes the result.
    pub workers: usize,
    pub resolution: usize,
    pub max_resolution: usize,
    pub base_angle: f64,
    /// Word-length cap for exact free-group growth before switching to
    /// curve coordinates.
    pub length_cap: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            n_max: 64,
            samples: 64,
            seed: 0,
            workers: 0,
            resolution: 4,
            max_resolution: 1024,
            base_angle: 0.0,
            length_cap: DEFAULT_LENGTH_CAP,
        }
    }
}

impl EstimateOptions {
    pub(crate) fn extract_options(&self, atoms: Vec<Point>) -> ExtractOptions {
        ExtractOptions {
            resolution: self.resolution,
            max_resolution: self.max_resolution,
            base_angle: self.base_angle,
            atoms,
        }
    }
}

/// `1, 2, 4, …` up to and including `n_max`.
pub fn doubling_schedule(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 1;
    while k < n_max {
        out.push(k);
        k *= 2;
    }
    if n_max > 0 {
        out.push(n_max);
    }
    out
}

/// `θ₂(b)`: exact free-group lengths while they stay under `length_cap`,
/// curve coordinates beyond. The flag reports the fallback.
pub fn theta2_value(b: &BraidWord, length_cap: usize) -> (f64, bool) {
    let curve = log_norm_max(b);
    // curve norms stay within a small factor of the word lengths
    if curve < (length_cap as f64).ln() - 2.0 {
        if let Ok(v) = theta2_exact(b, length_cap) {
            return (v, false);
        }
    }
    (curve, true)
}

/// Sampling plan for a tuple of measures, optionally pushed forward by a map.
pub(crate) struct Sampler<'a> {
    measures: &'a [MeasureSpec],
    push: Option<&'a MapSpec>,
    atoms: Vec<Point>,
}

impl<'a> Sampler<'a> {
    pub(crate) fn new(m: &MapSpec, measures: &'a [MeasureSpec], push: Option<&'a MapSpec>) -> Result<Self> {
        for ms in measures {
            ms.validate()?;
        }
        let mut atoms: Vec<Point> = measures.iter().flat_map(MeasureSpec::atoms).collect();
        if let Some(h) = push {
            atoms = atoms.iter().map(|&a| h.apply(a)).collect();
        }
        for &a in &atoms {
            let image = m.apply(a);
            let closed = atoms
                .iter()
                .any(|b| (b[0] - image[0]).hypot(b[1] - image[1]) <= ATOM_TOLERANCE);
            if !closed {
                return Err(Error::NotInvariant(format!(
                    "atom ({}, {}) maps to ({}, {}), which is not an atom",
                    a[0], a[1], image[0], image[1]
                )));
            }
        }
        Ok(Sampler { measures, push, atoms })
    }

    pub(crate) fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub(crate) fn all_atomic(&self) -> bool {
        self.measures.iter().all(MeasureSpec::is_atomic)
    }

    pub(crate) fn all_dirac(&self) -> bool {
        self.measures.iter().all(|m| matches!(m, MeasureSpec::Dirac { .. }))
    }

    pub(crate) fn draw(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<Point> {
        self.measures
            .iter()
            .map(|ms| {
                let p = ms.sample(rng);
                self.push.map_or(p, |h| h.apply(p))
            })
            .collect()
    }
}

/// One accepted configuration and its extracted braids.
pub(crate) struct Drawn {
    pub config: Configuration,
    pub extraction: Extraction,
    pub omega_rejections: u64,
    pub degenerate_rejections: u64,
}

/// Draws configurations for sample `index` until extraction succeeds.
pub(crate) fn draw_and_extract(
    m: &MapSpec,
    sampler: &Sampler,
    schedule: &[usize],
    opts: &EstimateOptions,
    index: usize,
) -> Result<Drawn> {
    let mut rng = stream_rng(opts.seed, index as u64);
    let extract = opts.extract_options(sampler.atoms().to_vec());
    let (mut omega, mut degenerate) = (0u64, 0u64);
    for _ in 0..MAX_REJECTIONS {
        let points = sampler.draw(&mut rng);
        let config = match Configuration::new(points) {
            Ok(c) => c,
            Err(e) if sampler.all_atomic() => return Err(e),
            Err(_) => {
                degenerate += 1;
                continue;
            }
        };
        match beta_schedule(&config, m, schedule, &extract) {
            Ok(extraction) => {
                return Ok(Drawn {
                    config,
                    extraction,
                    omega_rejections: omega,
                    degenerate_rejections: degenerate,
                })
            }
            Err(e) if sampler.all_atomic() => return Err(e),
            Err(Error::NotAdmissible) => omega += 1,
            Err(e @ (Error::Degenerate(_) | Error::Unstable { .. })) => {
                debug!("sample {index}: {e}");
                degenerate += 1;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::AllRejected {
        rejected: (omega + degenerate) as usize,
    })
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("worker pool: {e}")))
}

struct SampleValues {
    /// Per scheduled N: (value, lower track) before division by N.
    values: Vec<(f64, f64)>,
    fallbacks: u64,
    drawn: Drawn,
}

/// Estimates `Θ^(i)_{λ_1…λ_n}(φ)` by averaging `θ(β(P; φ^N))/N` over samples
/// `P ~ λ_1 × … × λ_n` for `N` in a doubling schedule.
///
/// Atomic measures must form an orbit-closed set. `θ₁` is bracketed by the
/// bounds of [`theta1_bounds`]: `per_n.mean` follows the upper track and
/// `per_n.lower_mean` the lower one.
pub fn theta_estimate(
    m: &MapSpec,
    measures: &[MeasureSpec],
    kind: Kind,
    opts: &EstimateOptions,
) -> Result<InvariantEstimate> {
    estimate_pushed(m, measures, None, kind, opts)
}

pub(crate) fn estimate_pushed(
    m: &MapSpec,
    measures: &[MeasureSpec],
    push: Option<&MapSpec>,
    kind: Kind,
    opts: &EstimateOptions,
) -> Result<InvariantEstimate> {
    if !matches!(kind, Kind::Theta1 | Kind::Theta2) {
        return Err(Error::Invalid(format!("theta_estimate cannot estimate {kind:?}")));
    }
    if measures.len() < 2 {
        return Err(Error::InvalidConfiguration("at least two measures are needed".into()));
    }
    if opts.samples == 0 || opts.n_max == 0 {
        return Err(Error::Invalid("samples and n_max must be positive".into()));
    }
    m.validate()?;
    let sampler = Sampler::new(m, measures, push)?;
    let schedule = doubling_schedule(opts.n_max);
    info!(
        "{kind:?}: {} samples, N up to {}, {} twists",
        opts.samples,
        opts.n_max,
        m.twists.len()
    );

    let run = |i: usize| -> Result<SampleValues> {
        let drawn = draw_and_extract(m, &sampler, &schedule, opts, i)?;
        let mut fallbacks = 0;
        let values = drawn
            .extraction
            .words
            .iter()
            .map(|w| match kind {
                Kind::Theta1 => {
                    let b = theta1_bounds(w);
                    (b.upper as f64, b.lower as f64)
                }
                _ => {
                    let (v, fell_back) = theta2_value(w, opts.length_cap);
                    fallbacks += u64::from(fell_back);
                    (v, v)
                }
            })
            .collect();
        Ok(SampleValues {
            values,
            fallbacks,
            drawn,
        })
    };
    let results: Vec<Result<SampleValues>> =
        pool(opts.workers)?.install(|| (0..opts.samples).into_par_iter().map(run).collect());
    let results: Vec<SampleValues> = results.into_iter().collect::<Result<_>>()?;

    let mut diagnostics = Diagnostics::default();
    let mut upper = vec![Vec::with_capacity(results.len()); schedule.len()];
    let mut lower = vec![Vec::with_capacity(results.len()); schedule.len()];
    for r in &results {
        diagnostics.omega_rejections += r.drawn.omega_rejections;
        diagnostics.degenerate_rejections += r.drawn.degenerate_rejections;
        diagnostics.dynnikov_fallbacks += r.fallbacks;
        diagnostics.record_resolution(r.drawn.extraction.resolution);
        for (j, &(u, l)) in r.values.iter().enumerate() {
            let n = schedule[j] as f64;
            upper[j].push(u / n);
            lower[j].push(l / n);
        }
    }
    if kind == Kind::Theta1 {
        diagnostics.record_gaps(&upper, &lower);
    }
    if sampler.all_dirac() {
        let last = results[0].drawn.extraction.words.last().expect("nonempty schedule");
        if let Ok(lk) = linking_matrix(last) {
            diagnostics.linking = Some(LinkingReport::per_iterate(&lk, opts.n_max));
        }
    }
    let lower = (kind == Kind::Theta1).then_some(lower);
    Ok(summarize(kind, &schedule, &upper, lower.as_deref(), opts, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(doubling_schedule(1), vec![1]);
        assert_eq!(doubling_schedule(8), vec![1, 2, 4, 8]);
        assert_eq!(doubling_schedule(12), vec![1, 2, 4, 8, 12]);
    }

    #[test]
    fn identity_estimates_vanish() {
        let opts = EstimateOptions {
            n_max: 4,
            samples: 8,
            seed: 5,
            ..Default::default()
        };
        let ms = vec![MeasureSpec::Area; 3];
        for kind in [Kind::Theta1, Kind::Theta2] {
            let e = theta_estimate(&MapSpec::identity(), &ms, kind, &opts).unwrap();
            assert_eq!(e.point_estimate, 0.0);
            assert_eq!(e.inf_estimate, 0.0);
        }
    }

    #[test]
    fn non_invariant_dirac_rejected() {
        let m = MapSpec::new(vec![crate::disk::TwistSpec::new([0.0, 0.0], 0.5, 0.3)]).unwrap();
        let ms = vec![
            MeasureSpec::Dirac { point: [0.1, 0.0] },
            MeasureSpec::Dirac { point: [0.6, 0.0] },
        ];
        let opts = EstimateOptions {
            n_max: 2,
            samples: 1,
            ..Default::default()
        };
        assert!(matches!(
            theta_estimate(&m, &ms, Kind::Theta1, &opts),
            Err(Error::NotInvariant(_))
        ));
    }
}
