//! Which imaginary quadratic fields split the d-th cyclotomic polynomial,
//! and the two Kronecker orbits they cut out.
//!
//! `cargo run --example cyclotomic_orbits -- 24`

use ballquot::cyclo::{euler_phi, kronecker, orbit_sets, suitable_fields, Factorization};

fn main() -> ballquot::Result<()> {
    let d: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    println!("d = {d} = {:?}, phi(d) = {}", Factorization::of(d).pairs(), euler_phi(d));
    println!("kronecker(-7, 11) = {}", kronecker(-7, 11));
    for field in suitable_fields(d)? {
        let (plus, minus) = orbit_sets(d, field)?;
        println!("  {field}: plus {:?}  minus {:?}", plus.members(), minus.members());
    }
    Ok(())
}
