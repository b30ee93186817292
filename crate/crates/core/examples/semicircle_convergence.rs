// W1 distance of normalized Kloosterman and Birch spectra to the semicircle.

use sumgraph::dist::{m4_check, spectral_to_empirical, w1_vs_law, LimitLaw};
use sumgraph::expsum::{birch_table, kloosterman_table};
use sumgraph::spectrum::{normalized_spectrum, spectrum_from_table};
use sumgraph::{make_b, make_field, make_k};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for p in [31u64, 61, 127] {
        let f = make_field(p, 1)?;
        let k = spectrum_from_table(&make_k(&f), &kloosterman_table(&f)?)?;
        let b = spectrum_from_table(&make_b(&f), &birch_table(&f)?)?;
        let wk = w1_vs_law(&spectral_to_empirical(&normalized_spectrum(&k, true)?, true), &LimitLaw::Semicircle)?;
        let wb = w1_vs_law(&spectral_to_empirical(&normalized_spectrum(&b, true)?, true), &LimitLaw::Semicircle)?;
        println!("p = {p:>3}: W1(K) = {wk:.5}  W1(B) = {wb:.5}  M4 = {:.5}", m4_check(&f)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
