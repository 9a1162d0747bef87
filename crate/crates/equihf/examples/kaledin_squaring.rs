use equihf::equivariant::{kaledin_check, random::random_complex, squaring_map};
use equihf::scalars::Gf2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let v = random_complex(&mut rng, 5);
        let k = kaledin_check(&v);
        println!("dim H(V) = {}  dim Tate(V⊗V) = {}  rank = {}  bijective = {}", k.source_dim, k.target_dim, k.rank, k.bijective);
    }

    let v = random_complex(&mut rng, 4);
    let cycle = vec![Gf2::ZERO; v.len()];
    let image = squaring_map(&v, &cycle).expect("zero is a cycle");
    println!("square of zero has {} nonzero coordinates", image.iter().filter(|p| !p.is_zero()).count());
}
