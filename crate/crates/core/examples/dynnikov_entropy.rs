//! Growth rate of curve coordinates under iteration: the entropy of a braid.

use braiddyn::braid::BraidWord;
use braiddyn::dynnikov::growth_rate;

fn main() -> braiddyn::Result<()> {
    let golden = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    for (name, letters) in [("σ1σ2⁻¹", vec![1, -2]), ("σ1σ2", vec![1, 2]), ("σ1²", vec![1, 1])] {
        let est = growth_rate(&BraidWord::new(3, letters)?, 60)?;
        println!(
            "{name}: rate {:.6} (polynomial fit preferred: {})",
            est.rate, est.fit.polynomial
        );
    }
    println!("log((3+√5)/2) = {golden:.6}");
    Ok(())
}
