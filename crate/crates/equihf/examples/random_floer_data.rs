use equihf::floermodel::{random_datum, transfer, validate, Mode, RandomDatumSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> equihf::error::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let exact = random_datum(&mut rng, &RandomDatumSpec::default())?;
    println!("exact datum: {} fixed points, {} periodic points, valid = {}", exact.m(), exact.k(), validate(&exact).is_valid());

    let spec = RandomDatumSpec { mode: Mode::Monotone, ..RandomDatumSpec::default() };
    let mono = random_datum(&mut rng, &spec)?;
    let t = transfer(&mono, None)?;
    println!("monotone datum: dim H = {} of {} orbits, consistent = {}", t.h_dim, t.orbit_count, t.consistent);
    println!();
    print!("{}", exact.to_text());
    Ok(())
}
