//! Word length `L(b)` in the Artin generators: exact by Cayley-graph search,
//! or bracketed by cheap lower and upper bounds.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{exponent_sum, free_cancel_letters, is_pure, linking_matrix, BraidWord, NormalForm};
use crate::error::{Error, Result};

/// Exact geodesic length by bidirectional breadth-first search over the
/// Cayley graph, with nodes keyed by normal form. `budget` caps the number of
/// visited nodes.
pub fn geodesic_length_exact(a: &BraidWord, budget: usize) -> Result<usize> {
    let n = a.strands();
    let target = a.normal_form();
    if target.is_identity() {
        return Ok(0);
    }
    let gens: Vec<i32> = (1..n as i32).flat_map(|k| [k, -k]).collect();

    let mut sides = [
        Side::new(Vec::new(), BraidWord::identity(n).normal_form()),
        Side::new(a.letters().to_vec(), target),
    ];
    loop {
        let (grow, other) = if sides[0].frontier.len() <= sides[1].frontier.len() {
            (0, 1)
        } else {
            (1, 0)
        };
        if sides[grow].frontier.is_empty() {
            // B_1 has no generators; any other exhaustion would be a bug
            return Err(Error::Exhausted { budget });
        }
        let depth = sides[grow].depth + 1;
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for word in std::mem::take(&mut sides[grow].frontier) {
            for &g in &gens {
                if word.last() == Some(&-g) {
                    continue;
                }
                let mut w = word.clone();
                w.push(g);
                let mut full = sides[grow].prefix.clone();
                full.extend_from_slice(&w);
                let key = BraidWord::from_letters_unchecked(n, full).normal_form();
                if sides[grow].seen.contains_key(&key) {
                    continue;
                }
                if let Some(&d) = sides[other].seen.get(&key) {
                    let total = depth + d;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                sides[grow].seen.insert(key, depth);
                next.push(w);
            }
            if sides[0].seen.len() + sides[1].seen.len() > budget {
                return Err(Error::Exhausted { budget });
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        sides[grow].frontier = next;
        sides[grow].depth = depth;
    }
}

/// Words reached as `prefix · w` for `w` in the frontier.
struct Side {
    prefix: Vec<i32>,
    frontier: Vec<Vec<i32>>,
    seen: HashMap<NormalForm, usize>,
    depth: usize,
}

impl Side {
    fn new(prefix: Vec<i32>, key: NormalForm) -> Self {
        let mut seen = HashMap::new();
        seen.insert(key, 0);
        Side {
            prefix,
            frontier: vec![Vec::new()],
            seen,
            depth: 0,
        }
    }
}

/// `lower <= L(b) <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theta1Bounds {
    pub lower: usize,
    pub upper: usize,
}

/// Number of rewritten words explored per shortening round.
const REWRITE_STATES: usize = 256;
/// Above this length only commutation-sliding cancellation is attempted.
const REWRITE_MAX_LEN: usize = 4096;

/// Bounds on the geodesic length.
///
/// The lower bound is the larger of `|exponent sum|` and, for pure braids,
/// the total `Σ_{i<j} 2|lk(i,j)|` (each letter crosses exactly one pair of
/// strands). The upper bound is the length reached by free cancellation,
/// cancellation across commuting letters, and a bounded search through
/// length-preserving braid relations.
pub fn theta1_bounds(a: &BraidWord) -> Theta1Bounds {
    let mut lower = exponent_sum(a).unsigned_abs() as usize;
    if is_pure(a) {
        let lk = linking_matrix(a).expect("pure");
        lower = lower.max(2 * lk.total_abs() as usize);
    }
    let upper = shorten(a.letters()).len();
    debug_assert!(lower <= upper);
    Theta1Bounds { lower, upper }
}

pub(crate) fn shorten(letters: &[i32]) -> Vec<i32> {
    let mut best = free_cancel_letters(letters);
    slide_cancel(&mut best);
    if best.len() > REWRITE_MAX_LEN {
        return best;
    }
    while let Some(shorter) = search_rewrites(&best) {
        best = shorter;
    }
    best
}

fn commute(a: i32, b: i32) -> bool {
    (a.abs() - b.abs()).abs() >= 2
}

/// Cancels `x ... x⁻¹` whenever every letter in between commutes with `x`.
fn slide_cancel(w: &mut Vec<i32>) -> bool {
    let mut any = false;
    'scan: loop {
        for i in 0..w.len() {
            let x = w[i];
            for j in (i + 1)..w.len() {
                if w[j] == -x {
                    w.remove(j);
                    w.remove(i);
                    any = true;
                    continue 'scan;
                }
                if !commute(x, w[j]) {
                    break;
                }
            }
        }
        return any;
    }
}

/// The length-3 relation move at `p`, if the letters there admit one.
fn triple_move(w: &[i32], p: usize) -> Option<[i32; 3]> {
    let (a, b, c) = (w[p], w[p + 1], w[p + 2]);
    let (i, j) = (a.abs(), b.abs());
    if c.abs() != i || (i - j).abs() != 1 {
        return None;
    }
    let (sa, sb, sc) = (a.signum(), b.signum(), c.signum());
    if sa == sb && sb == sc {
        Some([sa * j, sa * i, sa * j])
    } else if sa == -sc {
        Some([sc * j, sb * i, sa * j])
    } else {
        None
    }
}

fn search_rewrites(start: &[i32]) -> Option<Vec<i32>> {
    let target = start.len();
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.to_vec());
    queue.push_back(start.to_vec());
    while let Some(w) = queue.pop_front() {
        let mut candidates = Vec::new();
        for p in 0..w.len().saturating_sub(2) {
            if let Some(r) = triple_move(&w, p) {
                let mut v = w.clone();
                v[p..p + 3].copy_from_slice(&r);
                candidates.push(v);
            }
        }
        for p in 0..w.len().saturating_sub(1) {
            if commute(w[p], w[p + 1]) {
                let mut v = w.clone();
                v.swap(p, p + 1);
                candidates.push(v);
            }
        }
        for v in candidates {
            if seen.contains(&v) {
                continue;
            }
            let mut reduced = free_cancel_letters(&v);
            slide_cancel(&mut reduced);
            if reduced.len() < target {
                return Some(reduced);
            }
            if seen.len() >= REWRITE_STATES {
                return None;
            }
            seen.insert(v.clone());
            queue.push_back(v);
        }
    }
    None
}
