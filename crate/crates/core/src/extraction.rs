//! Reading pure braids off sampled orbit paths.
//!
//! The braid `β(P; φ^N)` is the geometric braid made of three stages: straight
//! segments from the base points `q_i` to `p_i`, the isotopy trails of `p_i`
//! under `N` iterations of the map, and straight segments from `φ^N(p_i)` back
//! to `q_i`. Its word is read by projecting onto an axis and recording every
//! transposition of the projected order.
//!
//! Sign convention: when adjacent positions `k, k+1` swap, the strand moving
//! towards larger projection passes either on the negative side of the
//! perpendicular coordinate (`σ_k`) or on the positive side (`σ_k⁻¹`). With
//! the perpendicular taken as the axis rotated a quarter turn counterclockwise,
//! two points exchanged by a counterclockwise half turn give `σ_1`.

use std::io::Write;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::braid::{free_cancel, BraidWord};
use crate::disk::{base_configuration, omega_check, Configuration, MapSpec, Point, ATOM_TOLERANCE};
use crate::error::{Error, Result};

/// Projections closer than this are treated as tied.
const TIE_EPS: f64 = 1e-12;
/// Crossings this close in (normalized) time may be reordered to keep swaps adjacent.
const SIMULTANEOUS: f64 = 1e-9;
/// Axis retries on ties; offsets stay within ±30° of the requested axis.
const AXIS_RETRIES: usize = 8;
/// Words longer than this are compared by free reduction only.
const NORMAL_FORM_COMPARE_MAX: usize = 2000;

/// `n` sampled paths over a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBundle {
    times: Vec<f64>,
    paths: Vec<Vec<Point>>,
}

impl PathBundle {
    pub fn new(times: Vec<f64>, paths: Vec<Vec<Point>>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidConfiguration("no paths".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("sample times must increase strictly".into()));
        }
        if paths.iter().any(|p| p.len() != times.len()) {
            return Err(Error::Invalid("every path needs one point per sample time".into()));
        }
        for k in 0..times.len() {
            for i in 0..paths.len() {
                for j in (i + 1)..paths.len() {
                    if paths[i][k] == paths[j][k] {
                        return Err(Error::Degenerate(format!(
                            "strands {} and {} collide at t = {}",
                            i + 1,
                            j + 1,
                            times[k]
                        )));
                    }
                }
            }
        }
        Ok(PathBundle { times, paths })
    }

    pub fn strands(&self) -> usize {
        self.paths.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn paths(&self) -> &[Vec<Point>] {
        &self.paths
    }

    fn sample(&self, k: usize) -> Vec<Point> {
        self.paths.iter().map(|p| p[k]).collect()
    }
}

/// One emitted generator with the time of its crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedLetter {
    pub time: f64,
    pub letter: i32,
}

/// Incremental crossing detector.
#[derive(Debug, Clone)]
struct Reader {
    axis: [f64; 2],
    perp: [f64; 2],
    /// `order[k]` is the strand at projected position `k`.
    order: Vec<usize>,
    letters: Vec<i32>,
    timed: Option<Vec<TimedLetter>>,
}

impl Reader {
    fn new(start: &[Point], axis_angle: f64, record: bool) -> Result<Self> {
        let (s, c) = axis_angle.sin_cos();
        let mut r = Reader {
            axis: [c, s],
            perp: [-s, c],
            order: (0..start.len()).collect(),
            letters: Vec::new(),
            timed: record.then(Vec::new),
        };
        let x: Vec<f64> = start.iter().map(|&p| r.project(p)).collect();
        r.check_ties(&x)?;
        r.order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
        Ok(r)
    }

    #[inline]
    fn project(&self, p: Point) -> f64 {
        p[0] * self.axis[0] + p[1] * self.axis[1]
    }

    #[inline]
    fn perpendicular(&self, p: Point) -> f64 {
        p[0] * self.perp[0] + p[1] * self.perp[1]
    }

    fn check_ties(&self, x: &[f64]) -> Result<()> {
        for i in 0..x.len() {
            for j in (i + 1)..x.len() {
                if (x[i] - x[j]).abs() <= TIE_EPS {
                    return Err(Error::Degenerate(format!(
                        "strands {} and {} have equal projections",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Reads the crossings of the linear interpolation from `prev` to `next`.
    fn advance(&mut self, prev: &[Point], next: &[Point], t0: f64, t1: f64) -> Result<()> {
        let n = prev.len();
        let x0: Vec<f64> = prev.iter().map(|&p| self.project(p)).collect();
        let x1: Vec<f64> = next.iter().map(|&p| self.project(p)).collect();
        self.check_ties(&x1)?;
        let mut events: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let d0 = x0[a] - x0[b];
                let d1 = x1[a] - x1[b];
                if (d0 < 0.0) != (d1 < 0.0) {
                    events.push((d0 / (d0 - d1), a, b));
                }
            }
        }
        if events.is_empty() {
            return Ok(());
        }
        events.sort_by(|e, f| e.0.total_cmp(&f.0));
        let mut position = vec![0; n];
        for (k, &s) in self.order.iter().enumerate() {
            position[s] = k;
        }
        while !events.is_empty() {
            let earliest = events[0].0;
            let pick = events
                .iter()
                .take_while(|e| e.0 <= earliest + SIMULTANEOUS)
                .position(|e| position[e.1].abs_diff(position[e.2]) == 1)
                .ok_or_else(|| Error::Degenerate("non-adjacent strands swap projections".into()))?;
            let (u, a, b) = events.remove(pick);
            let (left, right) = if position[a] < position[b] { (a, b) } else { (b, a) };
            let y = |s: usize| {
                let p = [
                    prev[s][0] + u * (next[s][0] - prev[s][0]),
                    prev[s][1] + u * (next[s][1] - prev[s][1]),
                ];
                self.perpendicular(p)
            };
            let (yl, yr) = (y(left), y(right));
            if (yl - yr).abs() <= TIE_EPS {
                return Err(Error::Degenerate(format!(
                    "strands {} and {} collide",
                    left + 1,
                    right + 1
                )));
            }
            let k = position[left];
            let letter = if yl < yr { k as i32 + 1 } else { -(k as i32 + 1) };
            self.letters.push(letter);
            if let Some(timed) = self.timed.as_mut() {
                timed.push(TimedLetter {
                    time: t0 + u * (t1 - t0),
                    letter,
                });
            }
            self.order.swap(k, k + 1);
            position[left] = k + 1;
            position[right] = k;
        }
        Ok(())
    }
}

/// Axis offsets tried in turn: 0, then a golden-ratio sequence in ±30°.
fn axis_offsets() -> impl Iterator<Item = f64> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    (0..=AXIS_RETRIES).map(move |k| {
        if k == 0 {
            0.0
        } else {
            ((k as f64 * golden).fract() - 0.5) * std::f64::consts::FRAC_PI_3
        }
    })
}

fn read_bundle(pb: &PathBundle, axis_angle: f64) -> Result<BraidWord> {
    let mut r = Reader::new(&pb.sample(0), axis_angle, false)?;
    for k in 1..pb.times.len() {
        r.advance(&pb.sample(k - 1), &pb.sample(k), pb.times[k - 1], pb.times[k])?;
    }
    BraidWord::new(pb.strands(), r.letters)
}

/// The braid word of a path bundle projected on the axis at `axis_angle`
/// radians, retrying slightly rotated axes when projections tie.
pub fn crossings_to_braid(pb: &PathBundle, axis_angle: f64) -> Result<BraidWord> {
    let mut last = None;
    for offset in axis_offsets() {
        match read_bundle(pb, axis_angle + offset) {
            Err(e @ Error::Degenerate(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Parameters for [`beta_schedule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractOptions {
    /// Initial isotopy samples per quarter turn of each twist.
    pub resolution: usize,
    /// Doubling stops with an error beyond this resolution.
    pub max_resolution: usize,
    /// Direction of the base diameter, in radians.
    pub base_angle: f64,
    /// Orbit points within `ATOM_TOLERANCE` of one of these are snapped onto
    /// it after every iterate, so periodic orbits do not drift.
    pub atoms: Vec<Point>,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            resolution: 4,
            max_resolution: 1024,
            base_angle: 0.0,
            atoms: Vec::new(),
        }
    }
}

/// Words for each requested iterate count, with the resolution that settled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub iterates: Vec<usize>,
    pub words: Vec<BraidWord>,
    pub resolution: usize,
    pub axis_angle: f64,
}

/// Per-sample record of a traced extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub time: f64,
    pub stage: u8,
    pub strand: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub samples: Vec<TraceSample>,
    pub letters: Vec<TimedLetter>,
}

impl Trace {
    pub fn write_samples_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time,stage,strand,x,y")?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{},{}", s.time, s.stage, s.strand, s.x, s.y)?;
        }
        Ok(())
    }

    pub fn write_letters_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time,letter")?;
        for l in &self.letters {
            writeln!(w, "{},{}", l.time, l.letter)?;
        }
        Ok(())
    }
}

fn snap(p: Point, atoms: &[Point]) -> Point {
    atoms
        .iter()
        .copied()
        .find(|a| (a[0] - p[0]).hypot(a[1] - p[1]) <= ATOM_TOLERANCE)
        .unwrap_or(p)
}

/// `φ^k(P)` for `k = 0..=n_max`, snapped onto atoms.
pub fn orbit(p: &Configuration, m: &MapSpec, n_max: usize, atoms: &[Point]) -> Vec<Vec<Point>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut cur: Vec<Point> = p.points().iter().map(|&q| snap(q, atoms)).collect();
    out.push(cur.clone());
    for _ in 0..n_max {
        cur = cur.iter().map(|&q| snap(m.apply(q), atoms)).collect();
        out.push(cur.clone());
    }
    out
}

struct Run<'a> {
    q: &'a [Point],
    m: &'a MapSpec,
    orbit: &'a [Vec<Point>],
    schedule: &'a [usize],
    steps: usize,
    axis_angle: f64,
}

impl Run<'_> {
    fn execute(&self, mut trace: Option<&mut Trace>) -> Result<Vec<BraidWord>> {
        let n = self.q.len();
        let n_max = *self.schedule.last().unwrap_or(&0);
        let per_iter = self.m.path_len(self.steps);
        let total = (per_iter * n_max).max(1) as f64;
        let stage2_time = |j: usize| (1.0 + j as f64 / total) / 3.0;
        let record = trace.is_some();

        let mut reader = Reader::new(self.q, self.axis_angle, record)?;
        let start = &self.orbit[0];
        reader.advance(self.q, start, 0.0, 1.0 / 3.0)?;
        if let Some(t) = trace.as_deref_mut() {
            push_samples(t, 0.0, 1, self.q);
            push_samples(t, 1.0 / 3.0, 1, start);
        }

        let mut words = Vec::with_capacity(self.schedule.len());
        let mut next_target = 0;
        let emit = |reader: &Reader, k: usize, trace: Option<&mut Trace>| -> Result<BraidWord> {
            let mut r = reader.clone();
            let end = &self.orbit[k];
            r.advance(end, self.q, 2.0 / 3.0, 1.0)?;
            if r.order.iter().enumerate().any(|(pos, &s)| pos != s) {
                return Err(Error::Degenerate("extracted braid is not pure".into()));
            }
            if let Some(t) = trace {
                push_samples(t, 2.0 / 3.0, 3, end);
                push_samples(t, 1.0, 3, self.q);
                t.letters = r.timed.take().unwrap_or_default();
            }
            Ok(free_cancel(&BraidWord::new(n, r.letters)?))
        };

        while next_target < self.schedule.len() && self.schedule[next_target] == 0 {
            words.push(emit(&reader, 0, None)?);
            next_target += 1;
        }
        let mut buf: Vec<Vec<Point>> = vec![Vec::with_capacity(per_iter); n];
        let mut j = 0usize;
        for k in 0..n_max {
            let from = &self.orbit[k];
            for (i, b) in buf.iter_mut().enumerate() {
                b.clear();
                self.m.extend_path(from[i], self.steps, b);
                if let Some(last) = b.last_mut() {
                    *last = self.orbit[k + 1][i];
                }
            }
            let mut prev: Vec<Point> = from.clone();
            for s in 0..buf[0].len() {
                let next: Vec<Point> = buf.iter().map(|b| b[s]).collect();
                j += 1;
                reader.advance(&prev, &next, stage2_time(j - 1), stage2_time(j))?;
                if let Some(t) = trace.as_deref_mut() {
                    push_samples(t, stage2_time(j), 2, &next);
                }
                prev = next;
            }
            if buf[0].is_empty() {
                // identity map: the orbit point is the start point
                reader.advance(from, &self.orbit[k + 1], stage2_time(j), stage2_time(j))?;
            }
            while next_target < self.schedule.len() && self.schedule[next_target] == k + 1 {
                let last = next_target + 1 == self.schedule.len();
                let t = if last { trace.as_deref_mut() } else { None };
                words.push(emit(&reader, k + 1, t)?);
                next_target += 1;
            }
        }
        Ok(words)
    }
}

fn push_samples(t: &mut Trace, time: f64, stage: u8, pts: &[Point]) {
    for (i, p) in pts.iter().enumerate() {
        t.samples.push(TraceSample {
            time,
            stage,
            strand: i + 1,
            x: p[0],
            y: p[1],
        });
    }
}

fn same_braid(a: &BraidWord, b: &BraidWord) -> bool {
    if a.letters() == b.letters() {
        return true;
    }
    a.len().max(b.len()) <= NORMAL_FORM_COMPARE_MAX && a.normal_form() == b.normal_form()
}

/// Checks both admissibility conditions for every requested iterate.
fn check_admissible(q: &Configuration, orbit: &[Vec<Point>], schedule: &[usize]) -> Result<()> {
    let start = Configuration::new(orbit[0].clone())?;
    if !omega_check(&start, q) {
        return Err(Error::NotAdmissible);
    }
    for &k in schedule {
        let end = Configuration::new(orbit[k].clone()).map_err(|_| Error::NotAdmissible)?;
        if !omega_check(&end, q) {
            return Err(Error::NotAdmissible);
        }
    }
    Ok(())
}

/// `β(P; φ^N)` for every `N` in `schedule`, sharing one pass over the orbit.
///
/// The resolution doubles from `opts.resolution` until two consecutive
/// doublings leave every word unchanged.
pub fn beta_schedule(p: &Configuration, m: &MapSpec, schedule: &[usize], opts: &ExtractOptions) -> Result<Extraction> {
    let (extraction, _) = extract(p, m, schedule, opts, false)?;
    Ok(extraction)
}

fn extract(
    p: &Configuration,
    m: &MapSpec,
    schedule: &[usize],
    opts: &ExtractOptions,
    want_trace: bool,
) -> Result<(Extraction, Option<Trace>)> {
    m.validate()?;
    let mut schedule = schedule.to_vec();
    schedule.sort_unstable();
    schedule.dedup();
    let n_max = *schedule.last().unwrap_or(&0);
    let q = base_configuration(p.len(), opts.base_angle);
    let orbit = orbit(p, m, n_max, &opts.atoms);
    check_admissible(&q, &orbit, &schedule)?;

    let mut steps = opts.resolution.max(1);
    let mut offsets = axis_offsets();
    let mut axis_angle = opts.base_angle + offsets.next().expect("nonempty");
    let mut previous: Option<Vec<BraidWord>> = None;
    let mut stable = 0;
    loop {
        if steps > opts.max_resolution.max(opts.resolution) {
            return Err(Error::Unstable {
                max_resolution: opts.max_resolution,
            });
        }
        let run = Run {
            q: q.points(),
            m,
            orbit: &orbit,
            schedule: &schedule,
            steps,
            axis_angle,
        };
        let words = match run.execute(None) {
            Ok(w) => w,
            Err(Error::Degenerate(why)) => {
                debug!("resolution {steps}, axis {axis_angle}: {why}");
                match offsets.next() {
                    Some(off) => {
                        axis_angle = opts.base_angle + off;
                        continue;
                    }
                    None => return Err(Error::Degenerate(why)),
                }
            }
            Err(e) => return Err(e),
        };
        let unchanged = previous
            .as_ref()
            .is_some_and(|prev| prev.iter().zip(&words).all(|(a, b)| same_braid(a, b)));
        stable = if unchanged { stable + 1 } else { 0 };
        if stable == 2 || m.is_identity() {
            let trace = if want_trace {
                let mut t = Trace::default();
                run.execute(Some(&mut t))?;
                Some(t)
            } else {
                None
            };
            let extraction = Extraction {
                iterates: schedule,
                words,
                resolution: steps,
                axis_angle,
            };
            return Ok((extraction, trace));
        }
        previous = Some(words);
        steps *= 2;
    }
}

/// `β(P; φ^N)`, doubling the isotopy resolution from `resolution` until the
/// word stabilizes.
pub fn beta(p: &Configuration, m: &MapSpec, n_iter: usize, resolution: usize) -> Result<BraidWord> {
    let opts = ExtractOptions {
        resolution,
        ..ExtractOptions::default()
    };
    let mut e = beta_schedule(p, m, &[n_iter], &opts)?;
    Ok(e.words.pop().expect("one word per iterate"))
}

/// `β(P; φ^N)` together with the sampled paths and timed letters of the
/// settled resolution.
pub fn beta_traced(
    p: &Configuration,
    m: &MapSpec,
    n_iter: usize,
    opts: &ExtractOptions,
) -> Result<(BraidWord, Extraction, Trace)> {
    let (e, trace) = extract(p, m, &[n_iter], opts, true)?;
    let word = e.words[0].clone();
    Ok((word, e, trace.expect("requested")))
}
