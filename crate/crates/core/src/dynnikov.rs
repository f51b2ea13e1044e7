//! Integer lamination coordinates with a piecewise-linear braid action.
//!
//! Word growth `L(x_i b^N)` is exponential for entropic braids, so the free
//! group words become infeasible past a few dozen iterations. Instead, the
//! loop `x_i` is tracked as a closed curve: a base puncture `q_0` is added to
//! the left of `q_1`, and `x_i` becomes the boundary of a neighbourhood of
//! the arc from `q_0` to `q_i`. The curve lives in the disk with `n + 1`
//! punctures and is stored as `2(n + 1)` Dynnikov coordinates
//! `(a_1, b_1, …, a_{n+1}, b_{n+1})` in the boundary-inclusive convention,
//! where `σ_k` acts on the block `(a_k, b_k, a_{k+1}, b_{k+1})` by the
//! max-plus update rules. Braid generators of `B_n` act as `σ_{k+1}` so that
//! the base puncture never moves.
//!
//! The ℓ¹ norm of the coordinate vector is comparable to `L(x_i b)` up to
//! constants depending on `n`; only growth rates are consumed downstream.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::growth::{fit_rate, tail_half, RateFit};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynnikovCoords {
    strands: usize,
    base: usize,
    coords: Vec<BigInt>,
}

/// JSON debug dump. Coordinates that fit in `i64` are numbers, larger ones
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordsDump {
    pub strands: usize,
    pub base: usize,
    pub coords: Vec<serde_json::Value>,
}

impl DynnikovCoords {
    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The basis loop this curve started from.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dump(&self) -> CoordsDump {
        CoordsDump {
            strands: self.strands,
            base: self.base,
            coords: self
                .coords
                .iter()
                .map(|c| match c.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(c.to_string()),
                })
                .collect(),
        }
    }

    fn apply_extended(&mut self, letter: i32) {
        let k = letter.unsigned_abs() as usize;
        let j = 2 * (k - 1);
        let (x, rest) = self.coords[j..j + 4].split_at_mut(1);
        let (y, rest) = rest.split_at_mut(1);
        let (z, t) = rest.split_at_mut(1);
        let (x, y, z, t) = (&mut x[0], &mut y[0], &mut z[0], &mut t[0]);
        if letter > 0 {
            let e = &*x - neg(y) - &*z + pos(t);
            let nx = &*x + pos(y) + pos(&(pos(t) - &e));
            let ny = &*t - pos(&e);
            let nz = &*z + neg(t) + neg(&(neg(y) + &e));
            let nt = &*y + pos(&e);
            (*x, *y, *z, *t) = (nx, ny, nz, nt);
        } else {
            let f = &*x + neg(y) - &*z - pos(t);
            let nx = &*x - pos(y) - pos(&(pos(t) + &f));
            let ny = &*t + neg(&f);
            let nz = &*z - neg(t) - neg(&(neg(y) - &f));
            let nt = &*y - neg(&f);
            (*x, *y, *z, *t) = (nx, ny, nz, nt);
        }
    }
}

fn pos(v: &BigInt) -> BigInt {
    if v.is_positive() {
        v.clone()
    } else {
        BigInt::zero()
    }
}

fn neg(v: &BigInt) -> BigInt {
    if v.is_negative() {
        v.clone()
    } else {
        BigInt::zero()
    }
}

/// Curve associated with the basis loop `x_i` on `n` strands.
pub fn initial_coords(n: usize, i: usize) -> Result<DynnikovCoords> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::BasisOutOfRange {
            index: i as i32,
            rank: n,
        });
    }
    let mut c = DynnikovCoords {
        strands: n,
        base: i,
        coords: vec![BigInt::zero(); 2 * (n + 1)],
    };
    // the curve around the base puncture and q_1
    c.coords[3] = BigInt::from(1);
    // slide the far end of the arc over to q_i
    for k in 2..=i {
        c.apply_extended(-(k as i32));
    }
    Ok(c)
}

pub fn update(c: &DynnikovCoords, g: i32) -> Result<DynnikovCoords> {
    if g == 0 || g.unsigned_abs() as usize >= c.strands {
        return Err(Error::GeneratorOutOfRange {
            index: g,
            strands: c.strands,
        });
    }
    let mut out = c.clone();
    out.apply_extended(g + g.signum());
    Ok(out)
}

pub fn apply_braid(c: &DynnikovCoords, b: &BraidWord) -> Result<DynnikovCoords> {
    if c.strands != b.strands() {
        return Err(Error::StrandMismatch {
            left: c.strands,
            right: b.strands(),
        });
    }
    let mut out = c.clone();
    for &g in b.letters() {
        out.apply_extended(g + g.signum());
    }
    Ok(out)
}

/// ℓ¹ norm of the coordinate vector.
pub fn curve_norm(c: &DynnikovCoords) -> BigInt {
    c.coords.iter().map(|v| v.abs()).sum()
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `max_i ln norm(c_i · b)`: the curve analogue of `θ₂(b)`.
pub fn log_norm_max(b: &BraidWord) -> f64 {
    let n = b.strands();
    (1..=n)
        .map(|i| {
            let c = apply_braid(&initial_coords(n, i).expect("in range"), b).expect("ranks agree");
            ln_big(&curve_norm(&c))
        })
        .fold(0.0, f64::max)
}

/// Growth rate estimate and the per-iteration series behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub rate: f64,
    /// `max_i ln norm(c_i · b^k)` for `k = 1..=iterations`.
    pub log_norms: Vec<f64>,
    pub fit: RateFit,
}

/// Exponential growth rate of curve norms under iteration of `b`, fitted on
/// the last half of the iterations. Polynomial growth reports 0.
pub fn growth_rate(b: &BraidWord, iterations: usize) -> Result<GrowthEstimate> {
    if iterations < 2 {
        return Err(Error::Invalid("growth_rate needs at least 2 iterations".into()));
    }
    let n = b.strands();
    let mut curves: Vec<DynnikovCoords> = (1..=n).map(|i| initial_coords(n, i)).collect::<Result<_>>()?;
    let mut log_norms = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let mut m = 0.0f64;
        for c in curves.iter_mut() {
            for &g in b.letters() {
                c.apply_extended(g + g.signum());
            }
            m = m.max(ln_big(&curve_norm(c)));
        }
        log_norms.push(m);
    }
    let points: Vec<(f64, f64)> = log_norms
        .iter()
        .enumerate()
        .map(|(k, &y)| ((k + 1) as f64, y))
        .collect();
    let fit = fit_rate(tail_half(&points));
    Ok(GrowthEstimate {
        rate: fit.rate.max(0.0),
        log_norms,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    fn ints(c: &DynnikovCoords) -> Vec<i64> {
        c.coords().iter().map(|v| v.to_i64().unwrap()).collect()
    }

    #[test]
    fn initial_vectors() {
        assert_eq!(ints(&initial_coords(3, 1).unwrap()), vec![0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(ints(&initial_coords(2, 2).unwrap()), vec![0, 0, -1, 0, 0, 1]);
        assert!(initial_coords(3, 4).is_err());
        assert!(initial_coords(3, 0).is_err());
    }

    #[test]
    fn identity_leaves_coordinates() {
        let c = initial_coords(4, 2).unwrap();
        assert_eq!(apply_braid(&c, &BraidWord::identity(4)).unwrap(), c);
    }

    #[test]
    fn norm_is_positive() {
        for n in 1..6 {
            for i in 1..=n {
                assert!(curve_norm(&initial_coords(n, i).unwrap()).is_positive());
            }
        }
    }

    #[test]
    fn update_range_checked() {
        let c = initial_coords(3, 1).unwrap();
        assert!(update(&c, 3).is_err());
        assert!(update(&c, 0).is_err());
    }

    #[test]
    fn log_of_huge_integers() {
        let v = BigInt::from(3).pow(2000);
        assert!((ln_big(&v) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_big(&BigInt::from(1)), 0.0);
    }

    #[test]
    fn identity_growth_is_zero() {
        assert_eq!(growth_rate(&BraidWord::identity(3), 10).unwrap().rate, 0.0);
        assert!(growth_rate(&BraidWord::identity(3), 1).is_err());
    }

    #[test]
    fn full_twist_grows_polynomially() {
        let est = growth_rate(&b(2, &[1, 1]), 60).unwrap();
        assert_eq!(est.rate, 0.0);
        assert!(est.fit.polynomial);
    }
}
