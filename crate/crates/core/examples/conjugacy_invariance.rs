//! Θ^(2) of a map and of its conjugate by an off-centre twist.

use braiddyn::disk::{MapSpec, TwistSpec};
use braiddyn::invariants::{invariance_experiment, EstimateOptions, Kind};
use braiddyn::protocols::{dirac, three_point_stirrer, STIRRER_BASE_ANGLE};

fn main() -> braiddyn::Result<()> {
    let (m, p) = three_point_stirrer();
    let h = MapSpec::new(vec![TwistSpec::new([0.3, 0.2], 0.45, 0.15)])?;
    for n_max in [64, 256, 1024] {
        let opts = EstimateOptions {
            n_max,
            samples: 1,
            seed: 1,
            base_angle: STIRRER_BASE_ANGLE,
            ..Default::default()
        };
        let rep = invariance_experiment(&m, &h, &dirac(&p), Kind::Theta2, &opts)?;
        println!(
            "N={n_max:>4}: {:.5} vs {:.5}",
            rep.original.point_estimate, rep.conjugated.point_estimate
        );
    }
    Ok(())
}
