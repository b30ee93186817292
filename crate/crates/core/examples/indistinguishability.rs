// A random graph and a Kloosterman graph with the same spectral law but
// opposite K_{2,3} counts.

use sumgraph::cayley::{build, codegree_stats, sample_er};
use sumgraph::dist::{spectral_to_empirical, w1_vs_law, EmpiricalMeasure, LimitLaw};
use sumgraph::expsum::kloosterman_table;
use sumgraph::spectrum::{dense_eigenvalues, normalized_spectrum, spectrum_from_table};
use sumgraph::{make_field, make_k};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(31, 1)?;
    let set = make_k(&f);
    let g = build(&set);
    let spec = normalized_spectrum(&spectrum_from_table(&set, &kloosterman_table(&f)?)?, true)?;
    let w = w1_vs_law(&spectral_to_empirical(&spec, true), &LimitLaw::Semicircle)?;
    println!("Gamma_K(F_31): W1 = {w:.4}, K23 = {}", codegree_stats(&g.simple_view())?.k23());

    let (n, p) = (961, 30.0 / 960.0);
    let er = sample_er(n, p, 1)?;
    let mut eig = dense_eigenvalues(n, er.graph.dense_adjacency());
    eig.pop(); // the Perron eigenvalue
    let scale = (n as f64 * p * (1.0 - p)).sqrt();
    let emp = EmpiricalMeasure::from_samples(eig.into_iter().map(|x| x / scale).collect());
    println!(
        "G(961, 30/960): W1 = {:.4}, K23 = {}",
        w1_vs_law(&emp, &LimitLaw::Semicircle)?,
        codegree_stats(&er.graph)?.k23()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
