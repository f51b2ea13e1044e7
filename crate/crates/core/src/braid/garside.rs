//! Left-greedy (Garside) normal form `Δ^p · s_1 ⋯ s_k`.
//!
//! Simple factors are positive permutation braids, stored as the permutation
//! `π` with `π[start] = end` (0-based positions). A positive simple braid
//! crosses each pair of strands at most once, so it is determined by `π`.

use serde::Serialize;

use super::BraidWord;

/// Canonical form of a braid; two words are equal in `B_n` iff their normal
/// forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NormalForm {
    strands: usize,
    /// Power of the half twist `Δ`.
    inf: i64,
    factors: Vec<Simple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
struct Simple(Vec<u16>);

impl Simple {
    fn identity(n: usize) -> Self {
        Simple((0..n as u16).collect())
    }

    fn delta(n: usize) -> Self {
        Simple((0..n as u16).rev().collect())
    }

    fn generator(n: usize, k: usize) -> Self {
        let mut s = Simple::identity(n);
        s.0.swap(k, k + 1);
        s
    }

    /// `Δ σ_k^{-1}`: the half twist with the final crossing at `k` removed.
    fn delta_without(n: usize, k: usize) -> Self {
        let mut s = Simple::delta(n);
        for v in s.0.iter_mut() {
            if *v as usize == k {
                *v += 1;
            } else if *v as usize == k + 1 {
                *v -= 1;
            }
        }
        s
    }

    fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    fn is_delta(&self) -> bool {
        let n = self.0.len();
        self.0.iter().enumerate().all(|(i, &v)| v as usize == n - 1 - i)
    }

    /// `Δ s Δ^{-1}`, which relabels `σ_k` as `σ_{n-k}`.
    fn flip(&self) -> Self {
        let n = self.0.len() as u16;
        Simple(
            (0..self.0.len())
                .map(|i| n - 1 - self.0[self.0.len() - 1 - i])
                .collect(),
        )
    }

    /// `σ_k` is a left divisor.
    fn starts_with(&self, k: usize) -> bool {
        self.0[k] > self.0[k + 1]
    }

    /// `σ_k` is a right divisor.
    fn ends_with(&self, k: usize) -> bool {
        let pos_k = self.0.iter().position(|&v| v as usize == k).unwrap();
        let pos_k1 = self.0.iter().position(|&v| v as usize == k + 1).unwrap();
        pos_k > pos_k1
    }

    /// Right-multiply by `σ_k`; caller guarantees the result is simple.
    fn push_right(&mut self, k: usize) {
        for v in self.0.iter_mut() {
            if *v as usize == k {
                *v += 1;
            } else if *v as usize == k + 1 {
                *v -= 1;
            }
        }
    }

    /// Left-divide by `σ_k`; caller guarantees `σ_k` is a left divisor.
    fn pop_left(&mut self, k: usize) {
        self.0.swap(k, k + 1);
    }

    fn length(&self) -> usize {
        let p = &self.0;
        let mut inv = 0;
        for i in 0..p.len() {
            for j in (i + 1)..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        inv
    }
}

/// Slides generators from `b` into `a` until `(a, b)` is left-weighted.
fn left_weight(a: &mut Simple, b: &mut Simple) -> bool {
    let n = a.0.len();
    let mut changed = false;
    'outer: loop {
        for k in 0..n.saturating_sub(1) {
            if b.starts_with(k) && !a.ends_with(k) {
                a.push_right(k);
                b.pop_left(k);
                changed = true;
                continue 'outer;
            }
        }
        return changed;
    }
}

impl NormalForm {
    pub fn of(word: &BraidWord) -> NormalForm {
        let n = word.strands();
        let letters = word.letters();

        // σ_k^{-1} = Δ^{-1} (Δ σ_k^{-1}); every Δ^{-1} is then moved to the front,
        // flipping each simple factor it passes.
        let negatives = letters.iter().filter(|&&l| l < 0).count();
        let mut flips_to_right = negatives;
        let mut factors: Vec<Simple> = Vec::with_capacity(letters.len());
        for &l in letters {
            let k = l.unsigned_abs() as usize - 1;
            let s = if l > 0 {
                Simple::generator(n, k)
            } else {
                flips_to_right -= 1;
                Simple::delta_without(n, k)
            };
            factors.push(if flips_to_right % 2 == 1 { s.flip() } else { s });
        }

        let mut nf = NormalForm {
            strands: n,
            inf: -(negatives as i64),
            factors: Vec::with_capacity(factors.len()),
        };
        for s in factors {
            nf.push_simple(s);
        }
        nf.settle();
        nf.strip();
        nf
    }

    fn push_simple(&mut self, s: Simple) {
        if s.is_identity() {
            return;
        }
        self.factors.push(s);
        let mut k = self.factors.len() - 1;
        while k > 0 {
            let (left, right) = self.factors.split_at_mut(k);
            if !left_weight(&mut left[k - 1], &mut right[0]) {
                break;
            }
            k -= 1;
        }
    }

    /// Full passes until every adjacent pair is left-weighted.
    fn settle(&mut self) {
        loop {
            let mut changed = false;
            for k in 1..self.factors.len() {
                let (left, right) = self.factors.split_at_mut(k);
                changed |= left_weight(&mut left[k - 1], &mut right[0]);
            }
            if !changed {
                break;
            }
        }
    }

    fn strip(&mut self) {
        let leading = self.factors.iter().take_while(|s| s.is_delta()).count();
        self.factors.drain(..leading);
        self.inf += leading as i64;
        while self.factors.last().is_some_and(Simple::is_identity) {
            self.factors.pop();
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn inf(&self) -> i64 {
        self.inf
    }

    /// Number of non-`Δ` simple factors (the canonical length).
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Positive length of the simple factors (excluding `Δ^p`).
    pub fn factor_letters(&self) -> usize {
        self.factors.iter().map(Simple::length).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{compose, inverse};

    fn nf(n: usize, l: &[i32]) -> NormalForm {
        BraidWord::new(n, l.to_vec()).unwrap().normal_form()
    }

    #[test]
    fn braid_relations_hold() {
        assert_eq!(nf(3, &[1, 2, 1]), nf(3, &[2, 1, 2]));
        assert_eq!(nf(4, &[1, 3]), nf(4, &[3, 1]));
        assert_eq!(nf(3, &[-1, -2, -1]), nf(3, &[-2, -1, -2]));
        assert_ne!(nf(3, &[1, 2]), nf(3, &[2, 1]));
        assert_ne!(nf(3, &[1]), nf(3, &[2]));
    }

    #[test]
    fn identity_and_inverses() {
        assert!(nf(3, &[]).is_identity());
        assert!(nf(3, &[1, -1]).is_identity());
        assert!(nf(4, &[-2, 3, 1, -1, -3, 2]).is_identity());
        let b = BraidWord::new(4, vec![1, -2, 3, 3, -1, 2]).unwrap();
        assert!(compose(&b, &inverse(&b)).unwrap().normal_form().is_identity());
        assert!(compose(&inverse(&b), &b).unwrap().normal_form().is_identity());
    }

    #[test]
    fn delta_is_recognized() {
        let d = nf(3, &[1, 2, 1]);
        assert_eq!(d.inf(), 1);
        assert_eq!(d.canonical_length(), 0);
        let full_twist = nf(3, &[1, 2, 1, 1, 2, 1]);
        assert_eq!(full_twist.inf(), 2);
        assert_eq!(nf(3, &[-1, -2, -1]).inf(), -1);
    }

    #[test]
    fn mixed_sign_triples() {
        // σ1 σ2 σ1⁻¹ = σ2⁻¹ σ1 σ2 and its relatives
        assert_eq!(nf(3, &[1, 2, -1]), nf(3, &[-2, 1, 2]));
        assert_eq!(nf(3, &[-1, 2, 1]), nf(3, &[2, 1, -2]));
        assert_eq!(nf(3, &[1, -2, -1]), nf(3, &[-2, -1, 2]));
        assert_eq!(nf(3, &[-1, -2, 1]), nf(3, &[2, -1, -2]));
    }

    #[test]
    fn pure_generator_is_not_trivial() {
        assert!(!nf(2, &[1, 1]).is_identity());
        assert_eq!(nf(2, &[1, 1]).inf(), 2);
        assert_eq!(nf(2, &[1, 1]), nf(2, &[1, 1, 1, -1]));
    }
}
