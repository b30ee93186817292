// Spectra from characters, cross-checked against a dense eigensolver.

use sumgraph::cayley::build;
use sumgraph::expsum::kloosterman_table;
use sumgraph::spectrum::{
    delocalization_check, multiplicity_by_product_class, spectrum_dense_oracle, spectrum_from_characters,
};
use sumgraph::{make_field, make_k};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(7, 1)?;
    let set = make_k(&f);
    let spec = spectrum_from_characters(&set)?;
    spec.check_trace_identities()?;
    println!("Gamma_K(F_7): {} distinct eigenvalues, loops = {}", spec.distinct_count(), spec.loops);
    for (x, m) in &spec.values {
        println!("  {x:>9.5} x{m}");
    }

    let mut chars = spec.expanded();
    let dense = spectrum_dense_oracle(&build(&set))?;
    chars.sort_by(f64::total_cmp);
    let gap = chars.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max gap to dense eigensolver: {gap:.2e}");

    let table = kloosterman_table(&f)?;
    for row in multiplicity_by_product_class(&spec, &table)?.iter().take(3) {
        println!("class m = {}: |K| = {:.4}, +{} / -{}", row.m, row.value, row.plus, row.minus);
    }

    let deloc = delocalization_check(&set)?;
    println!("eigenvectors: sup norm {:.4} <= {:.4}", deloc.max_sup_norm, deloc.bound);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
