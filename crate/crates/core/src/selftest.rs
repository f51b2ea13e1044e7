//! Quick checks against values computed independently of the code paths
//! under test, for the `selftest` subcommand.

use serde::Serialize;

use crate::braid::{compose, linking_matrix, BraidWord};
use crate::disk::{stream_rng, Configuration, MapSpec, MeasureSpec, TwistSpec};
use crate::dynnikov::growth_rate;
use crate::extraction::{beta, crossings_to_braid, PathBundle};
use crate::free_group::{apply_braid, theta2_exact, FreeWord};
use crate::invariants::{calabi, EstimateOptions};
use crate::protocols::turning_pair;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn word(n: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).expect("valid literal")
}

fn birman() -> Check {
    let s2 = word(2, &[1, 1]);
    let x1 = apply_braid(&FreeWord::basis(2, 1).expect("basis"), &s2).expect("rank");
    let x2 = apply_braid(&FreeWord::basis(2, 2).expect("basis"), &s2).expect("rank");
    let t1 = theta2_exact(&word(2, &[1]), 100).expect("short");
    let t2 = theta2_exact(&s2, 100).expect("short");
    let ok = x1.letters() == [1, 2, 1, -2, -1] && x2.letters() == [1, 2, -1] && t1 == 3f64.ln() && t2 == 5f64.ln();
    check(
        "birman-action",
        ok,
        format!("x1·σ1² = {:?}, θ2(σ1) = {t1}, θ2(σ1²) = {t2}", x1.letters()),
    )
}

fn golden_growth() -> Check {
    // the action of σ1σ2⁻¹ on curves has transition matrix [[2, 1], [1, 1]]
    let (a, b, d) = (2.0f64, 1.0f64, 1.0f64);
    let expected = ((a + d + ((a - d).powi(2) + 4.0 * b * b).sqrt()) / 2.0).ln();
    let got = growth_rate(&word(3, &[1, -2]), 60).expect("iterations").rate;
    check(
        "golden-growth",
        (got - expected).abs() < 1e-3,
        format!("{got} vs {expected}"),
    )
}

fn half_turn() -> Check {
    let steps = 32;
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let path = |phase: f64| -> Vec<[f64; 2]> {
        times
            .iter()
            .map(|t| {
                let a = phase + std::f64::consts::PI * t;
                [0.5 * a.cos(), 0.5 * a.sin()]
            })
            .collect()
    };
    let w = PathBundle::new(times.clone(), vec![path(std::f64::consts::PI), path(0.0)])
        .and_then(|pb| crossings_to_braid(&pb, 0.0));
    let ok = matches!(&w, Ok(w) if w.letters() == [1]);
    check("half-turn-sign", ok, format!("{w:?}"))
}

fn turning_pair_linking() -> Check {
    let (m, p) = turning_pair(2.0);
    let w = Configuration::new(p.to_vec()).and_then(|c| beta(&c, &m, 1, 4));
    let ok = matches!(&w, Ok(w) if w.letters() == [1, 1, 1, 1]
        && linking_matrix(w).map(|lk| lk.get(1, 2)) == Ok(2));
    check("fixed-pair-linking", ok, format!("{w:?}"))
}

fn cocycle() -> Check {
    let m = MapSpec {
        twists: vec![
            TwistSpec::new([-0.2, 0.1], 0.55, 0.7),
            TwistSpec::new([0.25, -0.1], 0.5, -0.4),
        ],
    };
    let mut rng = stream_rng(11, 0);
    let mut tested = 0;
    let mut failures = 0;
    while tested < 5 {
        let pts = (0..3).map(|_| MeasureSpec::Area.sample(&mut rng)).collect();
        let Ok(p) = Configuration::new(pts) else { continue };
        let (Ok(b2), Ok(b1), Ok(b1p)) = (beta(&p, &m, 2, 4), beta(&p, &m, 1, 4), beta(&p.map(&m), &m, 1, 4)) else {
            continue;
        };
        tested += 1;
        if !compose(&b1, &b1p).map(|c| c.equivalent(&b2)).unwrap_or(false) {
            failures += 1;
        }
    }
    check(
        "cocycle",
        failures == 0,
        format!("{failures} failures in {tested} configurations"),
    )
}

fn calabi_closed_form() -> Check {
    // centred twist: averaging over angles, Ang reduces to the rotation of
    // the outer point, so 𝓒 = 2A·E[f(max(r1, r2)/R)] = A·R⁴/3 half turns
    let (a, r) = (0.5, 0.7);
    let m = MapSpec {
        twists: vec![TwistSpec::new([0.0, 0.0], r, a)],
    };
    let opts = EstimateOptions {
        n_max: 4,
        samples: 400,
        seed: 5,
        ..Default::default()
    };
    let expected = a * r.powi(4) / 3.0;
    match calabi(&m, &MeasureSpec::Area, &MeasureSpec::Area, &opts) {
        Ok(rep) => {
            let got = rep.estimate.point_estimate;
            let se = rep.estimate.final_stderr();
            check(
                "calabi-closed-form",
                (got - expected).abs() <= 4.0 * se,
                format!("{got} ± {se} vs {expected}"),
            )
        }
        Err(e) => check("calabi-closed-form", false, e.to_string()),
    }
}

pub fn run_all() -> Vec<Check> {
    vec![
        birman(),
        golden_growth(),
        half_turn(),
        turning_pair_linking(),
        cocycle(),
        calabi_closed_form(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
