//! Homological transfer on the Clifford torus datum.

use equihf::floermodel::{clifford, hf_poly_invariants, transfer};

fn main() -> equihf::error::Result<()> {
    let d = clifford();
    print!("{}", d.to_text());
    let t = transfer(&d, None)?;
    println!("plus set: {:?}", t.plus_set);
    println!("transferred differential: {:?}", t.d_transferred);
    for c in &t.side_conditions {
        println!("  {}: {}", c.name, c.holds);
    }
    println!("dim H = {} over {} orbits, after {} of at most {} iterations", t.h_dim, t.orbit_count, t.iterations, t.iteration_bound);
    println!("GF(2)[h] invariants: {:?}", hf_poly_invariants(&d)?.invariant_factors);
    Ok(())
}
