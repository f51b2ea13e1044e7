//! Right action of `B_n` on the free group `F⟨x_1, …, x_n⟩ = π_1(D_n)`.
//!
//! `σ_i` substitutes `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i` and fixes the
//! other generators; `σ_i⁻¹` substitutes the inverse automorphism
//! `x_i ↦ x_{i+1}`, `x_{i+1} ↦ x_{i+1}⁻¹ x_i x_{i+1}`. A braid acts by folding
//! its letters left to right.

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};

/// Default cap on intermediate word length for [`theta2_exact`].
pub const DEFAULT_LENGTH_CAP: usize = 10_000_000;

/// A freely reduced word; letter `k` is `x_k`, `-k` is `x_k⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFreeWord", into = "RawFreeWord")]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RawFreeWord {
    rank: usize,
    letters: Vec<i32>,
}

impl TryFrom<RawFreeWord> for FreeWord {
    type Error = Error;

    fn try_from(raw: RawFreeWord) -> Result<Self> {
        let w = reduce(raw.rank, &raw.letters)?;
        if w.letters.len() != raw.letters.len() {
            return Err(Error::Invalid("free word is not reduced".into()));
        }
        Ok(w)
    }
}

impl From<FreeWord> for RawFreeWord {
    fn from(w: FreeWord) -> Self {
        RawFreeWord {
            rank: w.rank,
            letters: w.letters,
        }
    }
}

impl FreeWord {
    /// The basis element `x_i`.
    pub fn basis(rank: usize, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::BasisOutOfRange { index: i as i32, rank });
        }
        Ok(FreeWord {
            rank,
            letters: vec![i as i32],
        })
    }

    pub fn identity(rank: usize) -> Self {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[inline]
fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Free reduction of a raw letter sequence.
pub fn reduce(rank: usize, letters: &[i32]) -> Result<FreeWord> {
    let mut out = Vec::with_capacity(letters.len());
    for &l in letters {
        if l == 0 || l.unsigned_abs() as usize > rank {
            return Err(Error::BasisOutOfRange { index: l, rank });
        }
        push_reduced(&mut out, l);
    }
    Ok(FreeWord { rank, letters: out })
}

/// Image of a single basis letter (possibly inverted) under `σ_i^{±1}`.
fn image(letter: i32, g: i32) -> ([i32; 3], usize) {
    let i = g.abs();
    let a = letter.abs();
    let (img, len): ([i32; 3], usize) = if g > 0 {
        if a == i {
            ([i, i + 1, -i], 3)
        } else if a == i + 1 {
            ([i, 0, 0], 1)
        } else {
            ([a, 0, 0], 1)
        }
    } else if a == i {
        ([i + 1, 0, 0], 1)
    } else if a == i + 1 {
        ([-(i + 1), i, i + 1], 3)
    } else {
        ([a, 0, 0], 1)
    };
    if letter > 0 {
        (img, len)
    } else {
        let mut inv = [0; 3];
        for k in 0..len {
            inv[k] = -img[len - 1 - k];
        }
        (inv, len)
    }
}

fn substitute(letters: &[i32], g: i32, out: &mut Vec<i32>) {
    out.clear();
    for &l in letters {
        let (img, len) = image(l, g);
        for &x in &img[..len] {
            push_reduced(out, x);
        }
    }
}

pub fn apply_generator(w: &FreeWord, g: i32) -> Result<FreeWord> {
    if g == 0 || g.unsigned_abs() as usize >= w.rank {
        return Err(Error::GeneratorOutOfRange {
            index: g,
            strands: w.rank,
        });
    }
    let mut out = Vec::with_capacity(w.letters.len() + 2);
    substitute(&w.letters, g, &mut out);
    Ok(FreeWord {
        rank: w.rank,
        letters: out,
    })
}

/// `w · b`, folding the letters of `b` left to right.
pub fn apply_braid(w: &FreeWord, b: &BraidWord) -> Result<FreeWord> {
    if w.rank != b.strands() {
        return Err(Error::StrandMismatch {
            left: w.rank,
            right: b.strands(),
        });
    }
    apply_capped(w, b, usize::MAX).map(|opt| opt.expect("uncapped"))
}

fn apply_capped(w: &FreeWord, b: &BraidWord, cap: usize) -> Result<Option<FreeWord>> {
    let mut cur = w.letters.clone();
    let mut next = Vec::with_capacity(cur.len());
    for &g in b.letters() {
        substitute(&cur, g, &mut next);
        std::mem::swap(&mut cur, &mut next);
        if cur.len() > cap {
            return Ok(None);
        }
    }
    Ok(Some(FreeWord {
        rank: w.rank,
        letters: cur,
    }))
}

/// Reduced lengths `L(x_i b)` for `i = 1..=n`, or `None` once any
/// intermediate word exceeds `length_cap` letters.
pub fn basis_image_lengths(b: &BraidWord, length_cap: usize) -> Option<Vec<usize>> {
    let n = b.strands();
    (1..=n)
        .map(|i| {
            let x = FreeWord::basis(n, i).expect("in range");
            apply_capped(&x, b, length_cap).expect("ranks agree").map(|w| w.len())
        })
        .collect()
}

/// `θ₂(b) = max_i ln L(x_i b)`.
pub fn theta2_exact(b: &BraidWord, length_cap: usize) -> Result<f64> {
    let lengths = basis_image_lengths(b, length_cap).ok_or(Error::Exhausted { budget: length_cap })?;
    let max = lengths.into_iter().max().unwrap_or(1);
    Ok((max as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(rank: usize, l: &[i32]) -> FreeWord {
        reduce(rank, l).unwrap()
    }

    fn b(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn reduction() {
        assert_eq!(fw(2, &[1, -1, 2]).letters(), &[2]);
        assert!(fw(2, &[1, 2, -2, -1]).is_empty());
        assert_eq!(fw(2, &[1, 2, -1]).letters(), &[1, 2, -1]);
        assert!(reduce(2, &[3]).is_err());
    }

    #[test]
    fn generator_images() {
        let x1 = FreeWord::basis(2, 1).unwrap();
        let x2 = FreeWord::basis(2, 2).unwrap();
        assert_eq!(apply_generator(&x1, 1).unwrap().letters(), &[1, 2, -1]);
        assert_eq!(apply_generator(&x2, 1).unwrap().letters(), &[1]);
        let back = apply_generator(&apply_generator(&x1, 1).unwrap(), -1).unwrap();
        assert_eq!(back, x1);
        assert!(apply_generator(&x1, 2).is_err());
    }

    #[test]
    fn square_of_generator() {
        let x1 = FreeWord::basis(2, 1).unwrap();
        let x2 = FreeWord::basis(2, 2).unwrap();
        let s = b(2, &[1, 1]);
        assert_eq!(apply_braid(&x1, &s).unwrap().letters(), &[1, 2, 1, -2, -1]);
        assert_eq!(apply_braid(&x2, &s).unwrap().letters(), &[1, 2, -1]);
        let w = fw(3, &[1, -3, 2]);
        assert_eq!(apply_braid(&w, &BraidWord::identity(3)).unwrap(), w);
    }

    #[test]
    fn theta2_values() {
        assert_eq!(theta2_exact(&b(2, &[1]), 100).unwrap(), 3f64.ln());
        assert_eq!(theta2_exact(&BraidWord::identity(4), 100).unwrap(), 0.0);
        assert_eq!(theta2_exact(&b(2, &[1, 1]), 100).unwrap(), 5f64.ln());
        assert!(matches!(
            theta2_exact(&b(3, &[1, -2]).pow(20), 1000),
            Err(Error::Exhausted { .. })
        ));
    }

    #[test]
    fn relations_are_respected() {
        for i in 1..=3 {
            let x = FreeWord::basis(3, i).unwrap();
            assert_eq!(
                apply_braid(&x, &b(3, &[1, 2, 1])).unwrap(),
                apply_braid(&x, &b(3, &[2, 1, 2])).unwrap()
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let w = fw(3, &[1, -2, 3]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"rank":3,"letters":[1,-2,3]}"#);
        assert_eq!(serde_json::from_str::<FreeWord>(&s).unwrap(), w);
        assert!(serde_json::from_str::<FreeWord>(r#"{"rank":2,"letters":[1,-1]}"#).is_err());
    }
}
