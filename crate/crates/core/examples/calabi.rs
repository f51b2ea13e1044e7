//! Calabi invariant of a centred twist against its closed form `A·R⁴/3`.

use braiddyn::disk::{MapSpec, MeasureSpec, TwistSpec};
use braiddyn::invariants::{calabi, EstimateOptions};

fn main() -> braiddyn::Result<()> {
    let (a, r) = (0.5, 0.7);
    let m = MapSpec::new(vec![TwistSpec::new([0.0, 0.0], r, a)])?;
    let opts = EstimateOptions {
        n_max: 8,
        samples: 2000,
        seed: 3,
        ..Default::default()
    };
    let rep = calabi(&m, &MeasureSpec::Area, &MeasureSpec::Area, &opts)?;
    println!(
        "Monte Carlo {:.5} ± {:.5} half turns, closed form {:.5}",
        rep.estimate.point_estimate,
        rep.estimate.final_stderr(),
        a * r.powi(4) / 3.0
    );
    println!(
        "θ1 of the same pairs {:.5}; bounded: {}",
        rep.theta1.point_estimate, rep.bounded_by_theta1
    );
    println!("{:?}", rep.winding_gap);
    Ok(())
}
