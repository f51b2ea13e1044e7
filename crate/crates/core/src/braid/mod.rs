//! Words in the Artin braid group `B_n` and the pure braid subgroup.
//!
//! A letter is a nonzero `i32`: `k` stands for the generator `σ_k` and `-k`
//! for its inverse, with `1 <= k <= n - 1`. Words are read left to right, so
//! `compose(a, b)` is the braid `a` followed by `b`.

mod garside;
mod length;

pub use garside::NormalForm;
pub use length::{geodesic_length_exact, theta1_bounds, Theta1Bounds};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A braid word on a fixed number of strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBraid", into = "RawBraid")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RawBraid {
    strands: usize,
    letters: Vec<i32>,
}

impl TryFrom<RawBraid> for BraidWord {
    type Error = Error;

    fn try_from(raw: RawBraid) -> Result<Self> {
        BraidWord::new(raw.strands, raw.letters)
    }
}

impl From<BraidWord> for RawBraid {
    fn from(b: BraidWord) -> Self {
        RawBraid {
            strands: b.strands,
            letters: b.letters,
        }
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Invalid("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            check_letter(l, strands)?;
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands > 0, "a braid needs at least one strand");
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// The single generator `σ_k^{±1}`.
    pub fn generator(strands: usize, letter: i32) -> Result<Self> {
        BraidWord::new(strands, vec![letter])
    }

    pub(crate) fn from_letters_unchecked(strands: usize, letters: Vec<i32>) -> Self {
        debug_assert!(letters.iter().all(|&l| check_letter(l, strands).is_ok()));
        BraidWord { strands, letters }
    }

    pub fn strands(&self) -> usize {
        self.strands
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

    pub fn into_letters(self) -> Vec<i32> {
        self.letters
    }

    /// `self` repeated `k` times.
    pub fn pow(&self, k: usize) -> BraidWord {
        let mut letters = Vec::with_capacity(self.letters.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm::of(self)
    }

    /// Equality as group elements.
    pub fn equivalent(&self, other: &BraidWord) -> bool {
        self.strands == other.strands
            && (free_cancel(self).letters == free_cancel(other).letters || self.normal_form() == other.normal_form())
    }
}

fn check_letter(letter: i32, strands: usize) -> Result<()> {
    let k = letter.unsigned_abs() as usize;
    if letter == 0 || k >= strands {
        return Err(Error::GeneratorOutOfRange { index: letter, strands });
    }
    Ok(())
}

/// Concatenation `a` then `b`.
pub fn compose(a: &BraidWord, b: &BraidWord) -> Result<BraidWord> {
    if a.strands != b.strands {
        return Err(Error::StrandMismatch {
            left: a.strands,
            right: b.strands,
        });
    }
    let mut letters = Vec::with_capacity(a.len() + b.len());
    letters.extend_from_slice(&a.letters);
    letters.extend_from_slice(&b.letters);
    Ok(BraidWord {
        strands: a.strands,
        letters,
    })
}

pub fn inverse(a: &BraidWord) -> BraidWord {
    BraidWord {
        strands: a.strands,
        letters: a.letters.iter().rev().map(|l| -l).collect(),
    }
}

/// Deletes adjacent `σ_k σ_k^{-1}` pairs until none remain.
pub fn free_cancel(a: &BraidWord) -> BraidWord {
    BraidWord {
        strands: a.strands,
        letters: free_cancel_letters(&a.letters),
    }
}

pub(crate) fn free_cancel_letters(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn exponent_sum(a: &BraidWord) -> i64 {
    a.letters.iter().map(|&l| l.signum() as i64).sum()
}

/// A permutation of `1..=n`, stored as the image of each position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(images))
    }

    /// `images()[k - 1]` is the starting position of the strand that ends at `k`.
    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| v == k + 1)
    }
}

/// Strand permutation, with `σ_k` acting as the transposition `(k, k+1)`.
pub fn permutation(a: &BraidWord) -> Permutation {
    Permutation(track_positions(a).into_iter().map(|l| l + 1).collect())
}

fn track_positions(a: &BraidWord) -> Vec<usize> {
    let mut at: Vec<usize> = (0..a.strands).collect();
    for &l in &a.letters {
        let k = l.unsigned_abs() as usize - 1;
        at.swap(k, k + 1);
    }
    at
}

pub fn is_pure(a: &BraidWord) -> bool {
    track_positions(a).iter().enumerate().all(|(p, &l)| p == l)
}

/// Symmetric integer matrix of pairwise linking numbers of a pure braid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl LinkingMatrix {
    pub fn zeros(n: usize) -> Self {
        LinkingMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry for strands `i`, `j` (1-based labels).
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Sum of `|lk(i, j)|` over unordered pairs.
    pub fn total_abs(&self) -> i64 {
        let mut s = 0;
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                s += self.get(i, j).abs();
            }
        }
        s
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }
}

impl std::ops::Add for &LinkingMatrix {
    type Output = LinkingMatrix;

    fn add(self, rhs: &LinkingMatrix) -> LinkingMatrix {
        assert_eq!(self.n, rhs.n);
        LinkingMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Signed crossing count of each strand pair, halved.
pub fn linking_matrix(a: &BraidWord) -> Result<LinkingMatrix> {
    let counts = signed_crossings(a);
    if !is_pure(a) {
        return Err(Error::NotPure);
    }
    let n = a.strands;
    let mut m = LinkingMatrix::zeros(n);
    for (e, c) in m.entries.iter_mut().zip(&counts) {
        debug_assert!(c % 2 == 0, "pure braids cross each pair an even number of times");
        *e = c / 2;
    }
    Ok(m)
}

fn signed_crossings(a: &BraidWord) -> Vec<i64> {
    let n = a.strands;
    let mut counts = vec![0i64; n * n];
    let mut at: Vec<usize> = (0..n).collect();
    for &l in &a.letters {
        let k = l.unsigned_abs() as usize - 1;
        let (s, t) = (at[k], at[k + 1]);
        let eps = l.signum() as i64;
        counts[s * n + t] += eps;
        counts[t * n + s] += eps;
        at.swap(k, k + 1);
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn compose_concatenates() {
        assert_eq!(compose(&w(3, &[1]), &w(3, &[2])).unwrap(), w(3, &[1, 2]));
        assert_eq!(compose(&w(2, &[1]), &w(2, &[-1])).unwrap(), w(2, &[1, -1]));
        let b = w(4, &[1, -3, 2]);
        assert_eq!(compose(&BraidWord::identity(4), &b).unwrap(), b);
        assert!(matches!(
            compose(&w(3, &[1]), &w(4, &[1])),
            Err(Error::StrandMismatch { .. })
        ));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        assert_eq!(inverse(&w(3, &[1, 2])), w(3, &[-2, -1]));
        assert_eq!(inverse(&BraidWord::identity(3)), BraidWord::identity(3));
    }

    #[test]
    fn free_cancel_examples() {
        assert_eq!(free_cancel(&w(3, &[1, -1, 2])), w(3, &[2]));
        assert!(free_cancel(&w(3, &[1, 2, -2, -1])).is_empty());
        assert_eq!(free_cancel(&w(3, &[1, 2, 1])), w(3, &[1, 2, 1]));
    }

    #[test]
    fn letters_are_range_checked() {
        assert!(BraidWord::new(3, vec![3]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
        assert!(BraidWord::new(3, vec![-2, 2]).is_ok());
        assert!(BraidWord::new(0, vec![]).is_err());
    }

    #[test]
    fn permutations() {
        assert_eq!(permutation(&w(3, &[1])).images(), &[2, 1, 3]);
        assert!(permutation(&w(2, &[1, 1])).is_identity());
        // positions end up holding strands 2, 3, 1
        assert_eq!(permutation(&w(3, &[1, 2])).images(), &[2, 3, 1]);
    }

    #[test]
    fn purity() {
        assert!(is_pure(&w(2, &[1, 1])));
        assert!(!is_pure(&w(2, &[1])));
        assert!(!is_pure(&w(3, &[1, -2])));
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(exponent_sum(&w(3, &[1, 2, 1])), 3);
        assert_eq!(exponent_sum(&w(2, &[1, -1])), 0);
        assert_eq!(exponent_sum(&w(3, &[1, 1, -2])), 1);
    }

    #[test]
    fn linking_numbers() {
        assert_eq!(linking_matrix(&w(2, &[1, 1])).unwrap().get(1, 2), 1);
        assert_eq!(linking_matrix(&w(2, &[-1, -1])).unwrap().get(2, 1), -1);
        assert_eq!(
            linking_matrix(&BraidWord::identity(3)).unwrap(),
            LinkingMatrix::zeros(3)
        );
        assert_eq!(linking_matrix(&w(3, &[1])), Err(Error::NotPure));
        // σ2 σ1² σ2⁻¹ links strands 1 and 3
        let m = linking_matrix(&w(3, &[2, 1, 1, -2])).unwrap();
        assert_eq!(m.get(1, 3), 1);
        assert_eq!(m.get(1, 2), 0);
        assert_eq!(m.get(2, 3), 0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let b = w(3, &[1, -2, 1]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"strands":3,"letters":[1,-2,1]}"#);
        let back: BraidWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<BraidWord>(r#"{"strands":2,"letters":[2]}"#).is_err());
    }
}
