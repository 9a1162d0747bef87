//! Krein index of a few normal forms, together with the eigenvalue clusters
//! and their signatures.

use equihf::symplinalg::{build_blocks, krein_index, parse_blocks, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in ["i+:a=0.5", "i-:a=-0.5", "ii+:theta=1.2", "ii-:theta=-0.7", "iii:a1=0.3,a2=0.1", "ii+:theta=2;i-:a=-0.4"] {
        let a = build_blocks(&parse_blocks(spec)?, Tolerances::default())?;
        let k = krein_index(&a)?;
        println!("{spec:<22} kappa = {:>2}  dim E = {}", k.kappa, k.e_dim);
        for c in &k.eigen_clusters {
            println!("    {:+.4}{:+.4}i  x{}  signature {}", c.re, c.im, c.multiplicity, c.signature);
        }
    }
    Ok(())
}
