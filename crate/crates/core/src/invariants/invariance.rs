//! Conjugacy invariance: `Θ` for `φ` and for `h ∘ φ ∘ h⁻¹` with pushed-forward
//! measures should agree.

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_pushed, EstimateOptions};
use super::report::{InvariantEstimate, Kind};
use crate::disk::{MapSpec, MeasureSpec};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub kind: Kind,
    pub original: InvariantEstimate,
    pub conjugated: InvariantEstimate,
    /// `conjugated − original` point estimates.
    pub difference: f64,
    pub combined_stderr: f64,
    pub conjugated_depth: usize,
}

/// Runs the same estimator on `m` and on its conjugate by `h`; samples for the
/// conjugate are drawn as `h(sample)`.
pub fn invariance_experiment(
    m: &MapSpec,
    h: &MapSpec,
    measures: &[MeasureSpec],
    kind: Kind,
    opts: &EstimateOptions,
) -> Result<InvarianceReport> {
    let conjugate = m.conjugate_by(h)?;
    let original = estimate_pushed(m, measures, None, kind, opts)?;
    let conjugated = estimate_pushed(&conjugate, measures, Some(h), kind, opts)?;
    Ok(InvarianceReport {
        kind,
        difference: conjugated.point_estimate - original.point_estimate,
        combined_stderr: original.final_stderr().hypot(conjugated.final_stderr()),
        conjugated_depth: conjugate.twists.len(),
        original,
        conjugated,
    })
}
