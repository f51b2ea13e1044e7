//! Normal forms, exact geodesic length, cheap length bounds and linking numbers.

use braiddyn::braid::{geodesic_length_exact, linking_matrix, theta1_bounds, BraidWord};

fn main() -> braiddyn::Result<()> {
    let a = BraidWord::new(3, vec![1, 2, 1])?;
    let b = BraidWord::new(3, vec![2, 1, 2])?;
    println!("σ1σ2σ1 = σ2σ1σ2: {}", a.equivalent(&b));

    let commutator = BraidWord::new(3, vec![1, 2, -1, -2])?;
    println!(
        "L(σ1σ2σ1⁻¹σ2⁻¹) = {}, bounds {:?}",
        geodesic_length_exact(&commutator, 100_000)?,
        theta1_bounds(&commutator)
    );

    let pure = BraidWord::new(3, vec![1, 1, 2, 2, 2, 2])?;
    println!("linking matrix of σ1²σ2⁴: {:?}", linking_matrix(&pure)?.rows());
    println!(
        "Δ² normal form: {:?}",
        BraidWord::new(3, vec![1, 2, 1, 1, 2, 1])?.normal_form()
    );
    Ok(())
}
