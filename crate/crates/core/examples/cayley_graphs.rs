// Cayley sum graphs: degrees, loops, forbidden subgraphs and degenerate structure.

use sumgraph::cayley::{build, codegree_stats, loop_count, structure_report, Graph};
use sumgraph::{make_b, make_field, make_k};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(13, 1)?;
    let g = build(&make_k(&f));
    let simple = g.simple_view();
    let stats = codegree_stats(&simple)?;
    println!(
        "Gamma_K(F_13): n = {}, degree = {}, loops = {}, max codegree = {}, K23 = {}, C4 = {}",
        g.n(),
        g.degree(),
        loop_count(&g),
        stats.max_codegree,
        stats.k23(),
        stats.c4()
    );

    // Birch sets over characteristic 3 collapse into complete pieces
    for (p, n) in [(3, 1), (3, 2)] {
        let f = make_field(p, n)?;
        let g = build(&make_b(&f));
        let report = structure_report(&g.simple_view())?;
        println!("Gamma_B({}): {}", f.label(), report.summary());
    }

    let f5 = make_field(5, 1)?;
    let small = build(&make_k(&f5));
    println!("first edges of Gamma_K(F_5):");
    for line in small.edges_csv().lines().take(5) {
        println!("  {line}");
    }
    println!("simple view has {} edges", small.simple_view().edge_count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
