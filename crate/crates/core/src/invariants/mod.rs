//! Estimators for the asymptotic invariants of orbit braids.

pub mod ang;
pub mod calabi;
pub mod entropy;
pub mod estimate;
pub mod invariance;
pub mod report;

pub use ang::{ang, ang_birkhoff, AngValue};
pub use calabi::{calabi, CalabiReport, WindingGap};
pub use entropy::{entropy_report, line_stretch, EntropyReport, StretchEstimate, StretchOptions};
pub use estimate::{doubling_schedule, theta2_value, theta_estimate, EstimateOptions};
pub use invariance::{invariance_experiment, InvarianceReport};
pub use report::{Diagnostics, InvariantEstimate, Kind, PerN, SCHEMA_VERSION};
