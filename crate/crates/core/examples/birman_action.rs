//! Right action of braids on the free group, and the growth function θ₂.

use braiddyn::braid::BraidWord;
use braiddyn::free_group::{apply_braid, theta2_exact, FreeWord, DEFAULT_LENGTH_CAP};

fn main() -> braiddyn::Result<()> {
    let square = BraidWord::new(2, vec![1, 1])?;
    for i in 1..=2 {
        let image = apply_braid(&FreeWord::basis(2, i)?, &square)?;
        println!("x{i} · σ1² = {:?}", image.letters());
    }
    for letters in [vec![1], vec![1, 1], vec![1, -2], vec![1, -2, 1, -2, 1, -2]] {
        let b = BraidWord::new(3, letters)?;
        println!("θ2({:?}) = {:.6}", b.letters(), theta2_exact(&b, DEFAULT_LENGTH_CAP)?);
    }
    Ok(())
}
