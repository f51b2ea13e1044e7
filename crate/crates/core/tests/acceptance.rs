//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use braiddyn::braid::{compose, is_pure, linking_matrix, theta1_bounds, BraidWord};
use braiddyn::disk::{Configuration, MapSpec, MeasureSpec, RadialProfile, TwistSpec};
use braiddyn::dynnikov::{self, growth_rate, initial_coords};
use braiddyn::extraction::beta;
use braiddyn::free_group::{apply_braid, basis_image_lengths, theta2_exact, FreeWord};
use braiddyn::invariants::{ang, calabi, invariance_experiment, theta_estimate, EstimateOptions, Kind};
use braiddyn::protocols::{dirac, three_point_stirrer, turning_pair, STIRRER_BASE_ANGLE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < budget, || format!("took {took:.2?}, budget {budget:?}"))?;
    Ok(took)
}

fn word(n: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).unwrap()
}

fn random_braid(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    BraidWord::new(n, letters).unwrap()
}

fn random_free_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    braiddyn::free_group::reduce(rank, &letters).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s2 = word(2, &[1, 1]);
    let x1 = apply_braid(&FreeWord::basis(2, 1).unwrap(), &s2).unwrap();
    let x2 = apply_braid(&FreeWord::basis(2, 2).unwrap(), &s2).unwrap();
    ensure(x1.letters() == [1, 2, 1, -2, -1], || {
        format!("x1·σ1² = {:?}", x1.letters())
    })?;
    ensure(x2.letters() == [1, 2, -1], || format!("x2·σ1² = {:?}", x2.letters()))?;
    let t1 = theta2_exact(&word(2, &[1]), 1000).unwrap();
    let t2 = theta2_exact(&s2, 1000).unwrap();
    ensure(t1 == 3f64.ln(), || format!("θ2(σ1) = {t1}"))?;
    ensure(t2 == 5f64.ln(), || format!("θ2(σ1²) = {t2}"))?;
    let took = within_budget(start, Duration::from_secs(1))?;
    Ok(format!("images and θ2 exact, {took:.2?}"))
}

fn relation_pairs(n: usize) -> Vec<(Vec<i32>, Vec<i32>)> {
    let mut rels = vec![(vec![1, 2, 1], vec![2, 1, 2])];
    if n >= 4 {
        rels.push((vec![1, 3], vec![3, 1]));
    }
    rels
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..1000 {
        let n = rng.gen_range(3..=5);
        let prefix = random_braid(&mut rng, n, 5);
        let suffix = random_braid(&mut rng, n, 5);
        for (l, r) in relation_pairs(n) {
            let left = compose(&compose(&prefix, &word(n, &l)).unwrap(), &suffix).unwrap();
            let right = compose(&compose(&prefix, &word(n, &r)).unwrap(), &suffix).unwrap();

            let w = random_free_word(&mut rng, n, 11);
            let (a, b) = (apply_braid(&w, &left).unwrap(), apply_braid(&w, &right).unwrap());
            ensure(a == b, || {
                format!("free group, trial {trial}: {l:?} vs {r:?} on {:?}", w.letters())
            })?;

            let seed_braid = random_braid(&mut rng, n, 9);
            let c = dynnikov::apply_braid(&initial_coords(n, rng.gen_range(1..=n)).unwrap(), &seed_braid).unwrap();
            let (a, b) = (
                dynnikov::apply_braid(&c, &left).unwrap(),
                dynnikov::apply_braid(&c, &right).unwrap(),
            );
            ensure(a == b, || format!("curve coordinates, trial {trial}: {l:?} vs {r:?}"))?;
        }
    }
    let took = within_budget(start, Duration::from_secs(10))?;
    Ok(format!("1000 inputs agree on both sides, {took:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=5);
        let b = random_braid(&mut rng, n, 20);
        let upper = theta1_bounds(&b).upper as u32;
        // θ2 ≤ ln3·upper, compared as max length ≤ 3^upper in integers
        let lengths = basis_image_lengths(&b, usize::MAX).unwrap();
        if lengths.iter().any(|&l| l as u128 > 3u128.pow(upper)) {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("10000 random braids, 0 violations".into())
}

fn test_maps() -> Vec<MapSpec> {
    vec![
        MapSpec::new(vec![
            TwistSpec::new([-0.2, 0.1], 0.55, 0.7),
            TwistSpec::new([0.25, -0.1], 0.5, -0.4),
        ])
        .unwrap(),
        three_point_stirrer().0,
        MapSpec::new(vec![
            TwistSpec::new([0.0, 0.0], 0.9, 0.35),
            TwistSpec {
                profile: RadialProfile::Smooth,
                ..TwistSpec::new([0.3, 0.3], 0.4, -1.1)
            },
            TwistSpec::new([-0.35, -0.2], 0.5, 0.6),
        ])
        .unwrap(),
    ]
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut tested = 0;
    let mut nontrivial = 0;
    for (mi, m) in test_maps().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(40 + mi as u64);
        let mut admissible = 0;
        let mut drawn = 0;
        while admissible < 50 {
            drawn += 1;
            ensure(drawn < 5000, || format!("map {mi}: only {admissible} admissible draws"))?;
            let n = rng.gen_range(2..=4);
            let pts = (0..n).map(|_| MeasureSpec::Area.sample(&mut rng)).collect();
            let Ok(p) = Configuration::new(pts) else { continue };
            let (Ok(b2), Ok(b1), Ok(b1p)) = (beta(&p, m, 2, 4), beta(&p, m, 1, 4), beta(&p.map(m), m, 1, 4)) else {
                continue;
            };
            admissible += 1;
            for b in [&b2, &b1, &b1p] {
                ensure(is_pure(b), || format!("map {mi}: impure braid {:?}", b.letters()))?;
            }
            if !b2.normal_form().is_identity() {
                nontrivial += 1;
            }
            let product = compose(&b1, &b1p).unwrap();
            ensure(product.normal_form() == b2.normal_form(), || {
                format!("map {mi}: {:?}·{:?} ≠ {:?}", b1.letters(), b1p.letters(), b2.letters())
            })?;
        }
        tested += admissible;
    }
    let took = within_budget(start, Duration::from_secs(120))?;
    Ok(format!(
        "{tested} configurations over 3 maps ({nontrivial} with nontrivial β(P; φ²)), all pure, {took:.2?}"
    ))
}

fn criterion_5() -> Outcome {
    let mut out = Vec::new();
    for k in 1..=3usize {
        let (m, p) = turning_pair(k as f64);
        let b = beta(&Configuration::new(p.to_vec()).unwrap(), &m, 1, 4).map_err(|e| format!("k={k}: {e}"))?;
        ensure(b.letters() == vec![1; 2 * k].as_slice(), || {
            format!("k={k}: β = {:?}", b.letters())
        })?;
        let bounds = theta1_bounds(&b);
        ensure(bounds.lower == 2 * k && bounds.upper == 2 * k, || {
            format!("k={k}: tracks {bounds:?}")
        })?;
        let lk = linking_matrix(&b).unwrap().get(1, 2);
        ensure(lk == k as i64, || format!("k={k}: lk = {lk}"))?;

        let opts = EstimateOptions {
            n_max: 16,
            samples: 1,
            seed: 5,
            ..Default::default()
        };
        let est = theta_estimate(&m, &dirac(&p), Kind::Theta1, &opts).map_err(|e| e.to_string())?;
        for row in &est.per_n {
            let lower = row.lower_mean.unwrap_or(f64::NAN);
            ensure(row.mean == (2 * k) as f64 && lower == (2 * k) as f64, || {
                format!("k={k}, N={}: θ1 tracks ({lower}, {})", row.n, row.mean)
            })?;
        }
        out.push(format!("k={k} ok"));
    }
    Ok(format!("σ1^(2k), tracks (2k, 2k), lk = k: {}", out.join(", ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    // σ1σ2⁻¹ acts on the curve train track with transition matrix [[2, 1], [1, 1]]
    let (a, b, c, d) = (2.0f64, 1.0f64, 1.0f64, 1.0f64);
    let trace = a + d;
    let det = a * d - b * c;
    let oracle = ((trace + (trace * trace - 4.0 * det).sqrt()) / 2.0).ln();

    let rate = growth_rate(&word(3, &[1, -2]), 60).map_err(|e| e.to_string())?.rate;
    ensure((rate - oracle).abs() < 1e-3, || {
        format!("growth rate {rate} vs {oracle}")
    })?;

    let (m, p) = three_point_stirrer();
    let opts = EstimateOptions {
        n_max: 1024,
        samples: 1,
        seed: 6,
        base_angle: STIRRER_BASE_ANGLE,
        ..Default::default()
    };
    let pipeline = theta_estimate(&m, &dirac(&p), Kind::Theta2, &opts)
        .map_err(|e| e.to_string())?
        .point_estimate;
    ensure((pipeline - oracle).abs() < 1e-2, || {
        format!("pipeline {pipeline} vs {oracle}")
    })?;
    let took = within_budget(start, Duration::from_secs(300))?;
    Ok(format!(
        "oracle {oracle:.6}, growth rate {rate:.6}, pipeline {pipeline:.5}, {took:.2?}"
    ))
}

/// Winding of `p2 − p1` in half turns under a centred twist, from the
/// factorisation `r_out e^{iθ} (1 − ρ e^{iφ(t)})` with `ρ < 1`.
fn centred_twist_ang(twist: &TwistSpec, p1: [f64; 2], p2: [f64; 2]) -> f64 {
    let (r1, r2) = (p1[0].hypot(p1[1]), p2[0].hypot(p2[1]));
    let (a1, a2) = (p1[1].atan2(p1[0]), p2[1].atan2(p2[0]));
    let w = |r: f64| 2.0 * PI * twist.angle * twist.radius_profile(r);
    let (w1, w2) = (w(r1), w(r2));
    let (outer_turn, rho, phi0, dphi) = if r2 > r1 {
        (w2, r1 / r2, a1 - a2, w1 - w2)
    } else {
        (w1, r2 / r1, a2 - a1, w2 - w1)
    };
    let arg = |phi: f64| (-rho * phi.sin()).atan2(1.0 - rho * phi.cos());
    (outer_turn + arg(phi0 + dphi) - arg(phi0)) / PI
}

trait Profiled {
    fn radius_profile(&self, r: f64) -> f64;
}

impl Profiled for TwistSpec {
    fn radius_profile(&self, r: f64) -> f64 {
        if r >= self.radius {
            0.0
        } else {
            let u = r / self.radius;
            (1.0 - u * u).powi(2)
        }
    }
}

fn criterion_7() -> Outcome {
    let (amp, radius) = (0.5, 0.7);
    let twist = TwistSpec::new([0.0, 0.0], radius, amp);
    let m = MapSpec::new(vec![twist]).unwrap();

    // the closed form behind the quadrature, checked pointwise
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (p1, p2) = (MeasureSpec::Area.sample(&mut rng), MeasureSpec::Area.sample(&mut rng));
        let got = ang(&m, p1, p2, 4).map_err(|e| e.to_string())?.value;
        let want = centred_twist_ang(&twist, p1, p2);
        ensure((got - want).abs() < 1e-5, || {
            format!("Ang{p1:?}{p2:?} = {got}, closed form {want}")
        })?;
    }

    // averaging over the angle difference leaves the outer point's rotation,
    // since arg(1 − ρe^{iφ}) has zero mean for ρ < 1; radii have density 2r
    let grid = 200;
    let h = 1.0 / grid as f64;
    let mut quadrature = 0.0;
    for i in 0..grid {
        let r1 = (i as f64 + 0.5) * h;
        for j in 0..grid {
            let r2 = (j as f64 + 0.5) * h;
            let outer = 2.0 * amp * twist.radius_profile(r1.max(r2));
            quadrature += outer * 4.0 * r1 * r2 * h * h;
        }
    }

    let opts = EstimateOptions {
        n_max: 8,
        samples: 2000,
        seed: 7,
        ..Default::default()
    };
    let rep = calabi(&m, &MeasureSpec::Area, &MeasureSpec::Area, &opts).map_err(|e| e.to_string())?;
    let (est, se) = (rep.estimate.point_estimate, rep.estimate.final_stderr());
    ensure((est - quadrature).abs() <= 3.0 * se, || {
        format!("Monte Carlo {est} ± {se}, quadrature {quadrature}")
    })?;
    let theta1 = rep.theta1.point_estimate;
    ensure(est.abs() <= theta1, || format!("|𝓒| = {} > Θ1 = {theta1}", est.abs()))?;
    Ok(format!(
        "Monte Carlo {est:.5} ± {se:.5}, quadrature {quadrature:.5}, Θ1 {theta1:.5}"
    ))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for (label, m) in [("twist", test_maps()[0].clone()), ("stirrer", three_point_stirrer().0)] {
        let opts = EstimateOptions {
            n_max: 16,
            samples: 1000,
            seed: 8,
            ..Default::default()
        };
        let rep = calabi(&m, &MeasureSpec::Area, &MeasureSpec::Area, &opts).map_err(|e| e.to_string())?;
        let gap = rep.winding_gap;
        ensure(gap.pairs == 1000, || format!("{label}: only {} pairs", gap.pairs))?;
        ensure(gap.violations == 0 && gap.max_deviation <= 3.0, || {
            format!(
                "{label}: {} violations, max deviation {}",
                gap.violations, gap.max_deviation
            )
        })?;
        parts.push(format!(
            "{label}: {} checks, max deviation {:.3}",
            gap.checked, gap.max_deviation
        ));
    }
    Ok(format!("0 violations ({})", parts.join("; ")))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let (m, p) = three_point_stirrer();
    let h = MapSpec::new(vec![TwistSpec::new([0.3, 0.2], 0.45, 0.15)]).unwrap();
    let opts = EstimateOptions {
        n_max: 1024,
        samples: 1,
        seed: 9,
        base_angle: STIRRER_BASE_ANGLE,
        ..Default::default()
    };
    let rep = invariance_experiment(&m, &h, &dirac(&p), Kind::Theta2, &opts).map_err(|e| e.to_string())?;
    ensure(rep.difference.abs() < 1e-2, || format!("difference {}", rep.difference))?;
    let took = within_budget(start, Duration::from_secs(600))?;
    Ok(format!(
        "θ2 {:.5} vs conjugated {:.5}, {took:.2?}",
        rep.original.point_estimate, rep.conjugated.point_estimate
    ))
}

const DETERMINISM_CONFIG: &str = r#"{
  "n": 3,
  "map": {
    "twists": [
      { "center": [0.0, -0.25], "radius": 0.6, "angle": 0.7321516842030931 },
      { "center": [0.0, 0.25], "radius": 0.6, "angle": -0.7321516842030931 }
    ]
  },
  "measures": [{ "type": "area" }, { "type": "area" }, { "type": "area" }],
  "seed": 10,
  "N_max": 16,
  "samples": 24,
  "kinds": ["theta1", "theta2"],
  "conjugator": { "twists": [{ "center": [0.3, 0.2], "radius": 0.45, "angle": 0.15 }] }
}"#;

fn run_cli(args: &[&str], config: &Path, out: &Path, workers: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_braiddyn"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--workers", &workers.to_string()])
        .stdout(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("{args:?} exited with {status}"))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("config.json");
    std::fs::write(&config, DETERMINISM_CONFIG).map_err(|e| e.to_string())?;
    let pair_config = dir.path().join("pair.json");
    let pair = DETERMINISM_CONFIG
        .replace(
            r#"[{ "type": "area" }, { "type": "area" }, { "type": "area" }]"#,
            r#"[{ "type": "area" }, { "type": "area" }]"#,
        )
        .replace(r#""n": 3"#, r#""n": 2"#);
    std::fs::write(&pair_config, pair).map_err(|e| e.to_string())?;
    let commands: [(&str, &Path); 4] = [
        ("theta", &config),
        ("calabi", &pair_config),
        ("invariance-check", &config),
        ("extract", &config),
    ];
    let mut reference: Option<Vec<(String, Vec<u8>)>> = None;
    for workers in [1, 2, 5] {
        let out = dir.path().join(format!("w{workers}"));
        for (cmd, cfg) in commands {
            run_cli(&[cmd], cfg, &out, workers)?;
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
            .map_err(|e| e.to_string())?
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        match &reference {
            None => reference = Some(files),
            Some(r) => {
                let names: Vec<_> = r.iter().map(|f| f.0.as_str()).collect();
                ensure(r == &files, || {
                    format!("workers={workers} differs from workers=1 in {names:?}")
                })?;
            }
        }
    }
    let count = reference.map_or(0, |r| r.len());
    Ok(format!("{count} report files identical for 1, 2 and 5 workers"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Birman action exactness", criterion_1),
        ("relation invariance", criterion_2),
        ("θ2 ≤ ln3·θ1 upper track", criterion_3),
        ("cocycle law and purity", criterion_4),
        ("fixed pair linking", criterion_5),
        ("entropy constant", criterion_6),
        ("Calabi against quadrature", criterion_7),
        ("winding gap display", criterion_8),
        ("conjugacy invariance", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
