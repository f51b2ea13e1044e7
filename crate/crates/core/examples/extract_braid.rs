//! Reads the orbit braid of the three-point stirrer and writes its trace.
//!
//! Usage: cargo run --example extract_braid [N] > trace.csv

use braiddyn::disk::Configuration;
use braiddyn::extraction::{beta_traced, ExtractOptions};
use braiddyn::protocols::{three_point_stirrer, STIRRER_BASE_ANGLE};

fn main() -> braiddyn::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let (m, p) = three_point_stirrer();
    let opts = ExtractOptions {
        base_angle: STIRRER_BASE_ANGLE,
        atoms: p.to_vec(),
        ..Default::default()
    };
    let (word, extraction, trace) = beta_traced(&Configuration::new(p.to_vec())?, &m, n, &opts)?;
    eprintln!(
        "β(P; φ^{n}) = {:?} at {} steps per quarter turn",
        word.letters(),
        extraction.resolution
    );
    trace
        .write_samples_csv(std::io::stdout().lock())
        .map_err(|e| braiddyn::Error::Invalid(e.to_string()))
}
