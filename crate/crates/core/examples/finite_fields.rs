// Arithmetic in a prime field and in an extension field.
//
// Run with `cargo run --example finite_fields`.

use sumgraph::make_field;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f7 = make_field(7, 1)?;
    let (a, b) = (f7.elem(3), f7.elem(5));
    println!("{}: 3 + 5 = {}, 3 * 5 = {}", f7.label(), f7.add(a, b).0, f7.mul(a, b).0);
    println!("3^-1 = {}, (3/7) = {}", f7.inv(a)?.0, f7.legendre(a)?);

    // F_9 = F_3[x]/(m(x)); elements are coefficient vectors
    let f9 = make_field(3, 2)?;
    let g = f9.generator();
    println!("{} modulus {:?}, generator {:?}", f9.label(), f9.modulus(), f9.coeffs(g));
    for k in 0..4 {
        let x = f9.exp(k);
        println!("  g^{k} = {:?}  Tr = {}  psi = {:.4}", f9.coeffs(x), f9.trace(x), f9.psi(x));
    }
    // the additive character sums to zero over the field
    let total: num_complex::Complex64 = f9.elements().map(|x| f9.psi(x)).sum();
    println!("sum of psi over F_9 = {total:.2e}");

    // mixing fields is an error, not a silent wrong answer
    let x = f7.wrap(f7.elem(2));
    let y = f9.wrap(f9.elem(2));
    println!("F_7 + F_9 -> {}", x.add(&y).unwrap_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
