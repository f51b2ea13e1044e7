//! Area-preserving twist maps of the closed unit disk, their isotopies from
//! the identity, sampling measures, and the admissibility test for point
//! configurations.
//!
//! A twist rotates each point of a round support disk about its centre by an
//! angle that depends only on the distance to the centre, so it preserves
//! area and is the identity outside the support. Supports sit strictly inside
//! the unit disk, so every map is the identity near the boundary.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Upper bound on the number of twists in one map.
pub const MAX_TWISTS: usize = 4096;

/// Tolerance for deciding that an orbit returned to an atom.
pub const ATOM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialProfile {
    /// `(1 - u²)²`: C¹, vanishing with its derivative at `u = 1`.
    #[default]
    Bump,
    /// `exp(1 - 1/(1 - u²))`: C^∞ and flat at `u = 1`.
    Smooth,
}

impl RadialProfile {
    /// Profile value at `u = dist / radius`; 1 at the centre, 0 for `u >= 1`.
    pub fn eval(self, u: f64) -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - u * u;
        match self {
            RadialProfile::Bump => w * w,
            RadialProfile::Smooth => (1.0 - 1.0 / w).exp(),
        }
    }
}

/// One radial twist. `angle` is measured in full turns at the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistSpec {
    pub center: Point,
    pub radius: f64,
    pub angle: f64,
    #[serde(default)]
    pub profile: RadialProfile,
}

impl TwistSpec {
    pub fn new(center: Point, radius: f64, angle: f64) -> Self {
        TwistSpec {
            center,
            radius,
            angle,
            profile: RadialProfile::Bump,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [cx, cy] = self.center;
        if !(cx.is_finite() && cy.is_finite() && self.radius.is_finite() && self.angle.is_finite()) {
            return Err(Error::InvalidMap("non-finite twist parameter".into()));
        }
        if self.radius <= 0.0 {
            return Err(Error::InvalidMap(format!("radius {} must be positive", self.radius)));
        }
        if cx.hypot(cy) + self.radius >= 1.0 {
            return Err(Error::InvalidMap(format!(
                "support of twist at ({cx}, {cy}) with radius {} leaves the open unit disk",
                self.radius
            )));
        }
        Ok(())
    }

    /// Rotation angle in radians for a point at distance `r` from the centre.
    pub fn rotation_at(&self, r: f64) -> f64 {
        TAU * self.angle * self.profile.eval(r / self.radius)
    }

    /// The point after the fraction `tau` of this twist.
    #[inline]
    pub fn partial(&self, p: Point, tau: f64) -> Point {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let r = dx.hypot(dy);
        if r >= self.radius {
            return p;
        }
        let theta = tau * self.rotation_at(r);
        let (s, c) = theta.sin_cos();
        [self.center[0] + c * dx - s * dy, self.center[1] + s * dx + c * dy]
    }

    pub fn apply(&self, p: Point) -> Point {
        self.partial(p, 1.0)
    }

    pub fn inverse(&self) -> TwistSpec {
        TwistSpec {
            angle: -self.angle,
            ..*self
        }
    }

    /// Isotopy samples for this twist: enough that no point turns more than
    /// a quarter turn per step at `steps_per_twist = 1`.
    pub fn steps(&self, steps_per_twist: usize) -> usize {
        let quarter_turns = (4.0 * self.angle.abs()).ceil().max(1.0) as usize;
        steps_per_twist.max(1) * quarter_turns
    }
}

/// A composition of twists; the first listed is applied first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub twists: Vec<TwistSpec>,
}

impl MapSpec {
    pub fn identity() -> Self {
        MapSpec::default()
    }

    pub fn new(twists: Vec<TwistSpec>) -> Result<Self> {
        let m = MapSpec { twists };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.twists.len() > MAX_TWISTS {
            return Err(Error::DepthOverflow {
                depth: self.twists.len(),
                limit: MAX_TWISTS,
            });
        }
        self.twists.iter().try_for_each(TwistSpec::validate)
    }

    pub fn is_identity(&self) -> bool {
        self.twists.iter().all(|t| t.angle == 0.0)
    }

    pub fn evaluate(&self, p: Point) -> Result<Point> {
        check_in_disk(p)?;
        Ok(self.apply(p))
    }

    /// `evaluate` without the domain check.
    pub fn apply(&self, p: Point) -> Point {
        self.twists.iter().fold(p, |q, t| t.apply(q))
    }

    pub fn iterate(&self, p: Point, times: usize) -> Point {
        (0..times).fold(p, |q, _| self.apply(q))
    }

    pub fn inverse(&self) -> MapSpec {
        MapSpec {
            twists: self.twists.iter().rev().map(TwistSpec::inverse).collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &MapSpec) -> Result<MapSpec> {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        let depth = twists.len();
        if depth > MAX_TWISTS {
            return Err(Error::DepthOverflow {
                depth,
                limit: MAX_TWISTS,
            });
        }
        Ok(MapSpec { twists })
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &MapSpec) -> Result<MapSpec> {
        h.inverse().then(self)?.then(h)
    }

    pub fn power(&self, k: usize) -> Result<MapSpec> {
        let mut out = MapSpec::identity();
        for _ in 0..k {
            out = out.then(self)?;
        }
        Ok(out)
    }

    /// Number of samples after the start point in one traversal of the
    /// canonical isotopy.
    pub fn path_len(&self, steps_per_twist: usize) -> usize {
        self.twists.iter().map(|t| t.steps(steps_per_twist)).sum()
    }

    /// Writes the canonical isotopy path of `p` (excluding `p` itself) into
    /// `out`: each twist in turn, its angle scaled linearly in time.
    pub fn extend_path(&self, p: Point, steps_per_twist: usize, out: &mut Vec<Point>) {
        let mut q = p;
        for t in &self.twists {
            let steps = t.steps(steps_per_twist);
            for s in 1..steps {
                out.push(t.partial(q, s as f64 / steps as f64));
            }
            q = t.apply(q);
            out.push(q);
        }
    }
}

fn check_in_disk(p: Point) -> Result<()> {
    if !(p[0].is_finite() && p[1].is_finite()) || p[0].hypot(p[1]) > 1.0 + 1e-12 {
        return Err(Error::OutsideDisk { x: p[0], y: p[1] });
    }
    Ok(())
}

/// Sampled path of `p` under the canonical isotopy, from `p` to `φ(p)`.
pub fn isotopy_path(m: &MapSpec, p: Point, steps_per_twist: usize) -> Result<Vec<Point>> {
    check_in_disk(p)?;
    let mut out = Vec::with_capacity(m.path_len(steps_per_twist) + 1);
    out.push(p);
    m.extend_path(p, steps_per_twist, &mut out);
    Ok(out)
}

/// Central-difference Jacobian determinant of the map at `p`.
pub fn jacobian_check(m: &MapSpec, p: Point, h: f64) -> Result<f64> {
    if p[0].hypot(p[1]) + h * std::f64::consts::SQRT_2 >= 1.0 {
        return Err(Error::OutsideDisk { x: p[0], y: p[1] });
    }
    let fx1 = m.apply([p[0] + h, p[1]]);
    let fx0 = m.apply([p[0] - h, p[1]]);
    let fy1 = m.apply([p[0], p[1] + h]);
    let fy0 = m.apply([p[0], p[1] - h]);
    let a = (fx1[0] - fx0[0]) / (2.0 * h);
    let c = (fx1[1] - fx0[1]) / (2.0 * h);
    let b = (fy1[0] - fy0[0]) / (2.0 * h);
    let d = (fy1[1] - fy0[1]) / (2.0 * h);
    Ok(a * d - b * c)
}

/// Probability measures on the disk that the estimators can sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Normalized Lebesgue measure.
    Area,
    /// Density proportional to `profile(|p|)`.
    RadialDensity {
        profile: RadialProfile,
    },
    Dirac {
        point: Point,
    },
    UniformOnFiniteSet {
        points: Vec<Point>,
    },
}

impl MeasureSpec {
    pub fn validate(&self) -> Result<()> {
        for p in self.atoms() {
            check_in_disk(p)?;
            if p[0].hypot(p[1]) >= 1.0 {
                return Err(Error::InvalidConfiguration("atoms must lie in the open disk".into()));
            }
        }
        if let MeasureSpec::UniformOnFiniteSet { points } = self {
            if points.is_empty() {
                return Err(Error::InvalidConfiguration("empty finite set".into()));
            }
        }
        Ok(())
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, MeasureSpec::Dirac { .. } | MeasureSpec::UniformOnFiniteSet { .. })
    }

    pub fn atoms(&self) -> Vec<Point> {
        match self {
            MeasureSpec::Dirac { point } => vec![*point],
            MeasureSpec::UniformOnFiniteSet { points } => points.clone(),
            _ => Vec::new(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            MeasureSpec::Area => sample_area(rng),
            MeasureSpec::RadialDensity { profile } => loop {
                let p = sample_area(rng);
                if rng.gen::<f64>() < profile.eval(p[0].hypot(p[1])) {
                    break p;
                }
            },
            MeasureSpec::Dirac { point } => *point,
            MeasureSpec::UniformOnFiniteSet { points } => points[rng.gen_range(0..points.len())],
        }
    }

    /// Image measure under `h`, when it stays in the family.
    pub fn push_forward(&self, h: &MapSpec) -> MeasureSpec {
        match self {
            MeasureSpec::Dirac { point } => MeasureSpec::Dirac { point: h.apply(*point) },
            MeasureSpec::UniformOnFiniteSet { points } => MeasureSpec::UniformOnFiniteSet {
                points: points.iter().map(|&p| h.apply(p)).collect(),
            },
            other => other.clone(),
        }
    }
}

/// Polar inverse-CDF draw from the normalized area.
fn sample_area<R: Rng + ?Sized>(rng: &mut R) -> Point {
    let r = rng.gen::<f64>().sqrt();
    let theta = TAU * rng.gen::<f64>();
    [r * theta.cos(), r * theta.sin()]
}

/// Independent random stream `stream` derived from a root seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw from a measure, reproducible from `(seed, stream)`.
pub fn sample(ms: &MeasureSpec, seed: u64, stream: u64) -> Point {
    ms.sample(&mut stream_rng(seed, stream))
}

/// `n` pairwise distinct labelled points in the open disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Configuration(Vec<Point>);

impl TryFrom<Vec<Point>> for Configuration {
    type Error = Error;

    fn try_from(points: Vec<Point>) -> Result<Self> {
        Configuration::new(points)
    }
}

impl From<Configuration> for Vec<Point> {
    fn from(c: Configuration) -> Self {
        c.0
    }
}

impl Configuration {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfiguration("no points".into()));
        }
        for &p in &points {
            if !(p[0].is_finite() && p[1].is_finite()) || p[0].hypot(p[1]) >= 1.0 {
                return Err(Error::InvalidConfiguration(format!(
                    "({}, {}) is not in the open unit disk",
                    p[0], p[1]
                )));
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidConfiguration(format!(
                        "points {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Configuration(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self, m: &MapSpec) -> Configuration {
        Configuration(self.0.iter().map(|&p| m.apply(p)).collect())
    }
}

/// Base points equidistributed on the diameter at `angle` radians:
/// `q_k = (-1 + 2k/(n+1)) · (cos angle, sin angle)`.
pub fn base_configuration(n: usize, angle: f64) -> Configuration {
    let (s, c) = angle.sin_cos();
    Configuration(
        (1..=n)
            .map(|k| {
                let t = -1.0 + 2.0 * k as f64 / (n as f64 + 1.0);
                [t * c, t * s]
            })
            .collect(),
    )
}

/// True iff the straight segments from `(q_i, 0)` to `(p_i, 1)` in the
/// cylinder are pairwise disjoint.
///
/// Two such segments meet iff at some common height the planar difference
/// `(q_i - q_j) + t((p_i - p_j) - (q_i - q_j))` vanishes, i.e. iff the planar
/// segment from `q_i - q_j` to `p_i - p_j` passes through the origin.
pub fn omega_check(p: &Configuration, q: &Configuration) -> bool {
    assert_eq!(p.len(), q.len(), "configurations of different sizes");
    let (p, q) = (p.points(), q.points());
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let d0 = [q[i][0] - q[j][0], q[i][1] - q[j][1]];
            let d1 = [p[i][0] - p[j][0], p[i][1] - p[j][1]];
            let cross = d0[0] * d1[1] - d0[1] * d1[0];
            let dot = d0[0] * d1[0] + d0[1] * d1[1];
            let scale = d0[0].hypot(d0[1]) * d1[0].hypot(d1[1]);
            if cross.abs() <= 1e-12 * scale && dot <= 0.0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twist() -> TwistSpec {
        TwistSpec::new([0.1, -0.2], 0.6, 0.5)
    }

    #[test]
    fn identity_map_fixes_points() {
        let m = MapSpec::identity();
        assert_eq!(m.evaluate([0.3, 0.4]).unwrap(), [0.3, 0.4]);
        assert!(m.evaluate([1.0, 0.5]).is_err());
    }

    #[test]
    fn outside_support_is_fixed() {
        let m = MapSpec::new(vec![twist()]).unwrap();
        assert_eq!(m.evaluate([0.8, 0.5]).unwrap(), [0.8, 0.5]);
    }

    #[test]
    fn interior_point_rotates_by_profile() {
        let t = twist();
        let r = 0.3;
        let p = [t.center[0] + r, t.center[1]];
        let q = MapSpec::new(vec![t]).unwrap().evaluate(p).unwrap();
        let u = r / t.radius;
        let turns = 0.5 * (1.0 - u * u).powi(2);
        let expect = [
            t.center[0] + r * (TAU * turns).cos(),
            t.center[1] + r * (TAU * turns).sin(),
        ];
        assert!((q[0] - expect[0]).abs() < 1e-15 && (q[1] - expect[1]).abs() < 1e-15);
    }

    #[test]
    fn invalid_supports_rejected() {
        assert!(MapSpec::new(vec![TwistSpec::new([0.5, 0.0], 0.5, 1.0)]).is_err());
        assert!(MapSpec::new(vec![TwistSpec::new([0.0, 0.0], -0.1, 1.0)]).is_err());
    }

    #[test]
    fn isotopy_paths() {
        let id = MapSpec::identity();
        assert_eq!(isotopy_path(&id, [0.2, 0.1], 4).unwrap(), vec![[0.2, 0.1]]);
        let m = MapSpec::new(vec![twist(), TwistSpec::new([-0.3, 0.3], 0.5, -1.25)]).unwrap();
        let c = m.twists[0].center;
        let path = isotopy_path(&MapSpec::new(vec![twist()]).unwrap(), c, 8).unwrap();
        assert!(path.iter().all(|&q| q == c));
        let p = [0.05, 0.05];
        let path = isotopy_path(&m, p, 8).unwrap();
        assert_eq!(path[0], p);
        assert_eq!(*path.last().unwrap(), m.evaluate(p).unwrap());
    }

    #[test]
    fn inverse_undoes_map() {
        let m = MapSpec::new(vec![twist(), TwistSpec::new([-0.3, 0.3], 0.5, -1.25)]).unwrap();
        let p = [0.05, 0.05];
        let back = m.inverse().apply(m.apply(p));
        assert!((back[0] - p[0]).abs() < 1e-14 && (back[1] - p[1]).abs() < 1e-14);
    }

    #[test]
    fn jacobian_of_identity_is_one() {
        assert!((jacobian_check(&MapSpec::identity(), [0.1, 0.2], 1e-4).unwrap() - 1.0).abs() < 1e-10);
        assert!(jacobian_check(&MapSpec::identity(), [0.99, 0.0], 0.1).is_err());
    }

    #[test]
    fn dirac_and_finite_sampling() {
        let d = MeasureSpec::Dirac { point: [0.1, 0.2] };
        for s in 0..10 {
            assert_eq!(sample(&d, 7, s), [0.1, 0.2]);
        }
        let f = MeasureSpec::UniformOnFiniteSet {
            points: vec![[0.1, 0.0], [-0.1, 0.0]],
        };
        let mut rng = stream_rng(1, 0);
        let hits = (0..10_000).filter(|_| f.sample(&mut rng)[0] > 0.0).count();
        // binomial(10⁴, 1/2): 3σ = 150
        assert!((hits as i64 - 5000).abs() < 150, "{hits}");
    }

    #[test]
    fn area_sampling_is_centred() {
        let mut rng = stream_rng(3, 0);
        let m = 100_000;
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..m {
            let p = MeasureSpec::Area.sample(&mut rng);
            assert!(p[0].hypot(p[1]) <= 1.0);
            sx += p[0];
            sy += p[1];
        }
        // each coordinate has variance 1/4 under the normalized area
        let three_sigma = 3.0 * (0.25 / m as f64).sqrt();
        assert!((sx / m as f64).abs() < three_sigma);
        assert!((sy / m as f64).abs() < three_sigma);
    }

    #[test]
    fn configurations_reject_diagonal() {
        assert!(Configuration::new(vec![[0.1, 0.1], [0.1, 0.1]]).is_err());
        assert!(Configuration::new(vec![[1.0, 0.0]]).is_err());
    }

    #[test]
    fn base_points_on_diameter() {
        let q = base_configuration(3, 0.0);
        assert_eq!(q.points(), &[[-0.5, 0.0], [0.0, 0.0], [0.5, 0.0]]);
    }

    #[test]
    fn omega_examples() {
        let q = base_configuration(3, 0.0);
        assert!(omega_check(&q, &q));
        let swapped = Configuration::new(vec![[0.0, 0.0], [-0.5, 0.0], [0.5, 0.0]]).unwrap();
        assert!(!omega_check(&swapped, &q));
        // distinct heights off the diameter never collide
        let vertical = Configuration::new(vec![[0.0, 0.5], [0.0, -0.5], [0.0, 0.0]]).unwrap();
        assert!(omega_check(&vertical, &q));
    }
}
