//! Θ^(1) and Θ^(2) for the stirrer's periodic orbit and for area-distributed points.

use braiddyn::disk::MeasureSpec;
use braiddyn::invariants::{theta_estimate, EstimateOptions, Kind};
use braiddyn::protocols::{dirac, three_point_stirrer, STIRRER_BASE_ANGLE};

fn main() -> braiddyn::Result<()> {
    let (m, p) = three_point_stirrer();
    let opts = EstimateOptions {
        n_max: 256,
        samples: 1,
        seed: 1,
        base_angle: STIRRER_BASE_ANGLE,
        ..Default::default()
    };
    for kind in [Kind::Theta1, Kind::Theta2] {
        let e = theta_estimate(&m, &dirac(&p), kind, &opts)?;
        println!(
            "periodic orbit {kind:?}: {:.5} (inf {:.5})",
            e.point_estimate, e.inf_estimate
        );
    }
    let area = EstimateOptions {
        n_max: 64,
        samples: 32,
        ..opts
    };
    let e = theta_estimate(&m, &vec![MeasureSpec::Area; 3], Kind::Theta2, &area)?;
    for row in &e.per_n {
        println!("area N={:>3}: {:.4} ± {:.4}", row.n, row.mean, row.stderr);
    }
    Ok(())
}
