//! Conley-Zehnder indices of paths written in the path grammar, and the
//! relation between the Krein index and the index of the square.

use equihf::symplinalg::{conley_zehnder, parse_blocks, parse_path, verify_cz_krein, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for path in ["rot(1, pi/2)", "rot(1, 3*pi/2)", "loop(1, rot(1, pi/2))", "cat(rot(1, pi/3), rot(1, pi/3))"] {
        println!("mu[{path}] = {}", conley_zehnder(&parse_path(path, None)?)?);
    }

    let blocks = parse_blocks("ii+:theta=1.2;iii:a1=0.3,a2=0.1")?;
    let r = verify_cz_krein(&blocks, None, Tolerances::default())?;
    println!("n = {}  kappa = {}  mu = {}  mu(square) = {}", r.n, r.kappa, r.mu, r.mu_square);
    println!("kappa - n = {}  mu(square) - 2 mu = {}  holds: {}", r.lhs, r.rhs, r.holds);
    Ok(())
}
