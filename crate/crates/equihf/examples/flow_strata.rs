use equihf::morseflow::{codim1_faces, corner_count, enumerate_strata, relation_string, Sign, Space};

fn main() -> equihf::error::Result<()> {
    let i = 3;
    for sigma in [Sign::Plus, Sign::Minus] {
        println!("P^{{{i},{}}}", sigma.symbol());
        for codim in 0..=i {
            let strata = enumerate_strata(Space::P, i, sigma, Some(codim))?;
            println!("  codim {codim}: {} strata", strata.len());
        }
        println!("  {} codimension one faces", codim1_faces(i, sigma).len());
        println!("  {}", relation_string(i, sigma));
    }
    println!("corners of P^{{{i},-}}: {}", corner_count(i));
    for s in enumerate_strata(Space::Q, 2, Sign::Plus, None)? {
        println!("  {s}  (dim {})", s.dim());
    }
    Ok(())
}
