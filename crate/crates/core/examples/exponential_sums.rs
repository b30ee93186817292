// Kloosterman, Birch and Salié sums, naive and tabulated.

use sumgraph::expsum::{birch, birch_table, kloosterman, kloosterman_table, salie, salie_closed_form};
use sumgraph::make_field;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(31, 1)?;
    let (a, b) = (f.elem(2), f.elem(5));
    println!("K(2,5;31) = {:.6}", kloosterman(a, b, &f).re);
    println!("B(2,5;31) = {:.6}", birch(a, b, &f).re);
    println!("T(2,5;31) = {:.6}  closed form {:.6}", salie(a, b, &f)?, salie_closed_form(a, b, &f)?);

    // whole tables in one transform, spot-checked against the naive sums
    let kt = kloosterman_table(&f)?;
    println!(
        "Kloosterman table: max |K| = {:.4} <= 2 sqrt(31) = {:.4}, spot-check deviation {:.1e}",
        kt.max_nontrivial_abs(),
        2.0 * 31f64.sqrt(),
        kt.spot_check(32, 1)
    );
    let bt = birch_table(&f)?;
    println!("Birch table: max |B| = {:.4}", bt.max_nontrivial_abs());
    println!("{}", kt.reduced_csv()?.lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
