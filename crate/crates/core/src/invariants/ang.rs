//! Angular variation of the vector between two points along the isotopy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::disk::{MapSpec, Point};
use crate::error::{Error, Result};

/// Refinement stops once consecutive estimates agree to this many half turns.
pub const ANG_TOLERANCE: f64 = 1e-6;
const MAX_STEPS: usize = 1 << 16;

/// Winding in half-turn units: one exchange of two points counts 1, so a
/// full relative turn is 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngValue {
    pub value: f64,
}

impl AngValue {
    pub fn full_turns(self) -> f64 {
        self.value / 2.0
    }
}

fn winding(m: &MapSpec, p1: Point, p2: Point, steps: usize) -> f64 {
    let mut a = p1;
    let mut b = p2;
    let mut total = 0.0;
    for t in &m.twists {
        let k = t.steps(steps);
        let mut prev = [b[0] - a[0], b[1] - a[1]];
        for s in 1..=k {
            let tau = s as f64 / k as f64;
            let (x, y) = if s == k {
                (t.apply(a), t.apply(b))
            } else {
                (t.partial(a, tau), t.partial(b, tau))
            };
            let d = [y[0] - x[0], y[1] - x[1]];
            total += (prev[0] * d[1] - prev[1] * d[0]).atan2(prev[0] * d[0] + prev[1] * d[1]);
            prev = d;
        }
        a = t.apply(a);
        b = t.apply(b);
    }
    total
}

/// `Ang_φ(p1, p2)`, refined by doubling `resolution` until stable.
pub fn ang(m: &MapSpec, p1: Point, p2: Point, resolution: usize) -> Result<AngValue> {
    if p1 == p2 {
        return Err(Error::Invalid("Ang needs two distinct points".into()));
    }
    let mut steps = resolution.max(1);
    let mut last = winding(m, p1, p2, steps) / PI;
    while steps < MAX_STEPS {
        steps *= 2;
        let next = winding(m, p1, p2, steps) / PI;
        if (next - last).abs() <= ANG_TOLERANCE {
            return Ok(AngValue { value: next });
        }
        last = next;
    }
    Err(Error::Unstable {
        max_resolution: MAX_STEPS,
    })
}

/// `Ang_{φ^k}` for `k = 1..=n_iter` as Birkhoff sums of `Ang_φ` along the
/// pair orbit. `orbit[k]` must hold `(φ^k p1, φ^k p2)`.
pub fn ang_birkhoff(m: &MapSpec, orbit: &[[Point; 2]], resolution: usize) -> Result<Vec<f64>> {
    let mut sums = Vec::with_capacity(orbit.len().saturating_sub(1));
    let mut acc = 0.0;
    for pair in orbit.iter().take(orbit.len().saturating_sub(1)) {
        acc += ang(m, pair[0], pair[1], resolution)?.value;
        sums.push(acc);
    }
    Ok(sums)
}
