//! Θ^(2) as an entropy lower bound next to the growth of a material line.

use braiddyn::invariants::{entropy_report, EstimateOptions, StretchOptions};
use braiddyn::protocols::{dirac, three_point_stirrer, STIRRER_BASE_ANGLE};

fn main() -> braiddyn::Result<()> {
    let (m, p) = three_point_stirrer();
    let opts = EstimateOptions {
        n_max: 1024,
        samples: 1,
        seed: 1,
        base_angle: STIRRER_BASE_ANGLE,
        ..Default::default()
    };
    let stretch = StretchOptions {
        iterations: 10,
        ..Default::default()
    };
    let rep = entropy_report(&m, &dirac(&p), &opts, &stretch)?;
    println!("lower bound {:.5}", rep.entropy_lower_bound.point_estimate);
    println!("line stretching {:.5}", rep.stretch.rate);
    println!("ordering holds: {}", rep.ordering_holds);
    for note in &rep.notes {
        println!("note: {note}");
    }
    Ok(())
}
