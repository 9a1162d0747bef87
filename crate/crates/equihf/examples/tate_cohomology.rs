//! The circle with its antipodal and reflection involutions: group
//! cohomology, Tate cohomology and the Smith inequality.

use equihf::complexes::{Complex, Generator, Grading};
use equihf::equivariant::{group_cohomology, smith_bound_check, tate_dimension, verify_u_sequence, InvolutiveComplex};
use equihf::scalars::{Gf2, Mat};

/// Two vertices and two edges, each edge joining both vertices.
fn circle() -> Complex<Gf2> {
    let gens = vec![Generator::new("v0", 0), Generator::new("v1", 0), Generator::new("e0", 1), Generator::new("e1", 1)];
    let d = Mat::from_fn(4, 4, |r, c| Gf2(r >= 2 && c < 2));
    Complex::new(gens, Grading::Z, d).expect("circle is a complex")
}

fn describe(name: &str, perm: &[usize]) {
    let w = InvolutiveComplex::from_permutation(circle(), perm).expect("permutation commutes with d");
    let eq = group_cohomology(&w);
    let smith = smith_bound_check(&w);
    println!("{name}");
    println!("  H_eq: free rank {}, torsion exponents {:?}", eq.free_rank, eq.torsion_exponents);
    println!("  Tate dimension {}", tate_dimension(&w));
    println!("  Smith: dim H^iota = {} >= {} >= {} ({})", smith.invariant_dim, smith.generator_count, smith.free_rank, smith.holds);
    let u = verify_u_sequence(&w);
    println!("  u-sequence exact at h^{}: {}", u.truncation, u.exact);
}

fn main() {
    describe("antipodal", &[1, 0, 3, 2]);
    describe("reflection", &[0, 1, 3, 2]);
}
