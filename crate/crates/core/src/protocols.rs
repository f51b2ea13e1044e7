//! Ready-made twist protocols with known orbit braids.

use crate::disk::{MapSpec, MeasureSpec, Point, RadialProfile, TwistSpec};

/// Twist angle (in turns) that rotates points at distance `r` from the
/// centre by exactly `turns`.
pub fn angle_for(turns: f64, r: f64, radius: f64, profile: RadialProfile) -> f64 {
    turns / profile.eval(r / radius)
}

/// A map with a fixed pair of points completing `k` full relative turns per
/// iterate: one centred twist of radius 0.8 with the points at `(±0.4, 0)`.
pub fn turning_pair(k: f64) -> (MapSpec, [Point; 2]) {
    let (radius, r) = (0.8, 0.4);
    let twist = TwistSpec::new([0.0, 0.0], radius, angle_for(k, r, radius, RadialProfile::Bump));
    (MapSpec { twists: vec![twist] }, [[-r, 0.0], [r, 0.0]])
}

/// Three points on the vertical diameter stirred by two half-turn twists, the
/// lower pair counterclockwise then the upper pair clockwise. The points form
/// one period-3 orbit whose braid per iterate is a conjugate of `σ₁σ₂⁻¹`.
///
/// The orbit permutes collinear points, so no iterate is admissible against
/// base points on the same line; use the tilted [`STIRRER_BASE_ANGLE`].
pub fn three_point_stirrer() -> (MapSpec, [Point; 3]) {
    let (radius, r) = (0.6, 0.25);
    let half = angle_for(0.5, r, radius, RadialProfile::Bump);
    let map = MapSpec {
        twists: vec![
            TwistSpec::new([0.0, -0.25], radius, half),
            TwistSpec::new([0.0, 0.25], radius, -half),
        ],
    };
    (map, [[0.0, -0.5], [0.0, 0.0], [0.0, 0.5]])
}

/// Base diameter direction matching [`three_point_stirrer`], in radians. Not
/// a rational multiple of π, so sampled half turns never tie in projection.
pub const STIRRER_BASE_ANGLE: f64 = 0.7;

/// Dirac measures on the given points.
pub fn dirac(points: &[Point]) -> Vec<MeasureSpec> {
    points.iter().map(|&point| MeasureSpec::Dirac { point }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirrer_orbit_has_period_three() {
        let (m, p) = three_point_stirrer();
        let image: Vec<Point> = p.iter().map(|&x| m.apply(x)).collect();
        // p1 → p3 → p2 → p1
        let close = |a: Point, b: Point| (a[0] - b[0]).hypot(a[1] - b[1]) < 1e-12;
        assert!(close(image[0], p[2]));
        assert!(close(image[1], p[0]));
        assert!(close(image[2], p[1]));
    }

    #[test]
    fn turning_pair_is_fixed() {
        let (m, p) = turning_pair(2.0);
        for x in p {
            let y = m.apply(x);
            assert!((y[0] - x[0]).abs() < 1e-12 && (y[1] - x[1]).abs() < 1e-12);
        }
    }
}
