//! Exponential growth-rate fitting for sequences `y_k` observed at steps `k`.

use serde::{Deserialize, Serialize};

/// Least-squares fit of `ln y` against `k` (exponential model) and against
/// `ln k` (power-law model) over the same points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Reported rate: the exponential slope, or 0 when the power law fits better.
    pub rate: f64,
    pub exponential_slope: f64,
    pub exponential_rss: f64,
    pub power_exponent: f64,
    pub power_rss: f64,
    pub polynomial: bool,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (my + slope * (x - mx));
            r * r
        })
        .sum();
    (slope, rss)
}

/// Fits `(k, ln y_k)` pairs with `k >= 1`. Needs at least two points.
pub fn fit_rate(points: &[(f64, f64)]) -> RateFit {
    assert!(points.len() >= 2, "a rate fit needs at least two points");
    let ks: Vec<f64> = points.iter().map(|p| p.0).collect();
    let lnk: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (exponential_slope, exponential_rss) = least_squares(&ks, &ys);
    let (power_exponent, power_rss) = least_squares(&lnk, &ys);
    let polynomial = exponential_slope <= 0.0 || power_rss <= exponential_rss;
    RateFit {
        rate: if polynomial { 0.0 } else { exponential_slope },
        exponential_slope,
        exponential_rss,
        power_exponent,
        power_rss,
        polynomial,
    }
}

/// The last half (at least two points) of a sequence.
pub fn tail_half<T: Copy>(points: &[T]) -> &[T] {
    let start = (points.len() / 2).min(points.len().saturating_sub(2));
    &points[start..]
}
