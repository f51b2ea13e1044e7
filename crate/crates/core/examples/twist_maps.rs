//! Twist maps of the disk: evaluation, area preservation, sampling and
//! admissibility of point configurations.

use braiddyn::disk::{
    base_configuration, isotopy_path, jacobian_check, omega_check, sample, Configuration, MapSpec, MeasureSpec,
    TwistSpec,
};

fn main() -> braiddyn::Result<()> {
    let m = MapSpec::new(vec![
        TwistSpec::new([-0.2, 0.1], 0.55, 0.7),
        TwistSpec::new([0.25, -0.1], 0.5, -0.4),
    ])?;
    let p = [0.05, 0.1];
    println!("φ({p:?}) = {:?}", m.evaluate(p)?);
    println!("Jacobian determinant there: {:.12}", jacobian_check(&m, p, 1e-4)?);
    let path = isotopy_path(&m, p, 8)?;
    println!(
        "isotopy path: {} samples ending at {:?}",
        path.len(),
        path.last().unwrap()
    );

    let draws: Vec<_> = (0..3).map(|s| sample(&MeasureSpec::Area, 42, s)).collect();
    let config = Configuration::new(draws)?;
    let q = base_configuration(3, 0.0);
    println!("sampled {:?}", config.points());
    println!(
        "admissible: {}, after φ: {}",
        omega_check(&config, &q),
        omega_check(&config.map(&m), &q)
    );
    Ok(())
}
