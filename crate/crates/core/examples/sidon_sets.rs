// Sidon properties of the hyperbola, the cubic and their partial variants.

use sumgraph::sidon::{is_partial_symmetric_sidon, is_sidon, is_symmetric_sidon, witness_is_valid};
use sumgraph::{make_b, make_field, make_k, make_kplus, make_kt, GroupPoint};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(11, 1)?;
    let origin = GroupPoint::ZERO;

    let k = make_k(&f);
    let v = is_symmetric_sidon(&k, origin)?;
    println!("K(F_11): |S| = {}, symmetric Sidon about 0: {}", k.len(), v.holds);

    // K is not Sidon outright; the witness is a genuine collision
    let v = is_sidon(&k)?;
    if let Some(w) = v.witness {
        println!("K is not Sidon, witness valid: {}", witness_is_valid(&f, &w, None));
    }

    let b = make_b(&f);
    println!("B(F_11): symmetric Sidon = {}", is_symmetric_sidon(&b, origin)?.holds);

    for t in [0.3, 0.5, 0.8] {
        let kt = make_kt(&f, t)?;
        println!(
            "K_{t}(11): |S| = {}, Sidon = {}, partial symmetric Sidon = {}",
            kt.len(),
            is_sidon(&kt)?.holds,
            is_partial_symmetric_sidon(&kt, origin)?.holds
        );
    }

    let kp = make_kplus(&f)?;
    println!("K_+(11): |S| = {}, Sidon = {}", kp.len(), is_sidon(&kp)?.holds);
    println!("{}", kp.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
