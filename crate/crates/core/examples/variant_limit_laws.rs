// Partial hyperbolas and the quadratic-residue hyperbola against sampled limit laws.

use sumgraph::dist::{
    kt_tail_bound, mixed_moment_check, sample_kt_limit, sample_sc_plus_sa, spectral_to_empirical, w1_two_sample,
    EmpiricalMeasure,
};
use sumgraph::spectrum::{normalized_spectrum, spectrum_from_characters};
use sumgraph::{make_field, make_kplus, make_kt};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(103, 1)?;
    let (h, n) = (1024, 100_000);

    let kt = make_kt(&f, 0.5)?;
    let spec = normalized_spectrum(&spectrum_from_characters(&kt)?, true)?;
    let sample = sample_kt_limit(0.5, h, n, 7)?;
    println!(
        "K_1/2(103) vs series law (H = {h}, tail {:.1e}): W1 = {:.4}",
        kt_tail_bound(0.5, h),
        w1_two_sample(&spectral_to_empirical(&spec, true), &sample)
    );

    let kp = make_kplus(&f)?;
    let spec = spectral_to_empirical(&normalized_spectrum(&spectrum_from_characters(&kp)?, true)?, true);
    let sample = sample_sc_plus_sa(n, 7);
    let scaled = EmpiricalMeasure::from_atoms(
        sample.atoms().iter().map(|&(x, w)| (x / std::f64::consts::SQRT_2, w)).collect(),
    );
    println!(
        "K_+(103): W1 to |SC+SA| = {:.4}, to |SC+SA|/sqrt 2 = {:.4}",
        w1_two_sample(&spec, &sample),
        w1_two_sample(&spec, &scaled)
    );

    let mm = mixed_moment_check(&f, 0, 2)?;
    println!("E[U_0(K) (T/sqrt p)^2] = {:.4} (predicted {:.4})", mm.value.re, mm.predicted.re);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
