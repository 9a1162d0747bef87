mod oracles;

use equihf::floermodel::{
    hf_poly_invariants, localized_check, random_datum, smith_check, spectral_checks, transfer, validate, zero_diagonal, Builtin,
    FloerDatum, Mode, RandomDatumSpec,
};
use equihf::scalars::{Gf2, Mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits(m: &Mat<Gf2>) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).0 as u8).collect()).collect()
}

fn rho_bits(d: &FloerDatum) -> Vec<Vec<u8>> {
    let k = d.k();
    (0..k).map(|r| (0..k).map(|c| (d.rho[c] == r) as u8).collect()).collect()
}

/// Levels `0..N-1` of E2 of the h-adic spectral sequence truncated at h^N,
/// from ranks alone: `dim H - r` at the bottom and `dim H - 2r` above, with
/// `r` the rank of `1 + ρ` on `H(CF(φ²))`.
fn predicted_e2(d: &FloerDatum, n: usize) -> Vec<usize> {
    let dd = bits(&d.d_phi2);
    let h = d.k() - 2 * oracles::rank_gf2(&dd);
    let r = (2 * h - oracles::borel_truncated_dim(&dd, &rho_bits(d), 2)) / 2;
    (0..n - 1).map(|j| if j == 0 { h - r } else { h - 2 * r }).collect()
}

fn all_checks_pass(d: &FloerDatum) {
    let v = validate(d);
    assert!(v.is_valid(), "{:?}", v.failures());
    let l = localized_check(d).unwrap();
    assert!(l.passes, "{l:?}");
    assert_eq!(l.e0_bijective, l.bijective);
    let s = smith_check(d).unwrap();
    assert!(s.chain_holds && s.quantum_holds, "{s:?}");
    let sp = spectral_checks(d).unwrap();
    assert!(sp.h_adic_agrees && sp.action_agrees, "{sp:?}");
}

#[test]
fn every_builtin_passes_every_check() {
    for b in Builtin::catalogue() {
        all_checks_pass(&b.build().unwrap());
    }
}

#[test]
fn e2_matches_rank_prediction_on_builtins() {
    for b in Builtin::catalogue() {
        let d = b.build().unwrap();
        let sp = spectral_checks(&d).unwrap();
        assert_eq!(sp.e2_levels, predicted_e2(&d, sp.truncation), "{b}");
    }
}

#[test]
fn removing_any_diagonal_coefficient_is_detected() {
    let mut data = Vec::new();
    for n in 1..=3 {
        for i in 1..=2 * n {
            data.push(Builtin::MorsePair { i, n });
        }
        for i in 2..2 * n {
            data.push(Builtin::TwistedPair { i, n });
        }
    }
    for b in data {
        let d = b.build().unwrap();
        for x in 0..d.m() {
            let broken = zero_diagonal(&d, x);
            let v = validate(&broken);
            let failures = v.failures();
            assert!(failures.contains(&"pants_relations") || failures.contains(&"pants_chain_map"), "{b}, point {x}: {failures:?}");
            assert!(!localized_check(&broken).unwrap().passes, "{b}, point {x}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_exact_data(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_datum(&mut rng, &RandomDatumSpec::default()).unwrap();
        all_checks_pass(&d);
        let sp = spectral_checks(&d).unwrap();
        prop_assert_eq!(sp.e2_levels, predicted_e2(&d, sp.truncation));
        let text = d.to_text();
        prop_assert_eq!(equihf::floermodel::parse_datum(&text).unwrap(), d);
    }

    #[test]
    fn random_monotone_transfer(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomDatumSpec { mode: Mode::Monotone, ..RandomDatumSpec::default() };
        let d = random_datum(&mut rng, &spec).unwrap();
        prop_assert!(validate(&d).is_valid(), "{:?}", validate(&d).failures());
        let t = transfer(&d, None).unwrap();
        prop_assert!(t.side_conditions.iter().all(|c| c.holds));
        prop_assert!(t.consistent);
        prop_assert!(t.h_dim <= t.orbit_count);
        prop_assert_eq!(Some(t.h_dim), hf_poly_invariants(&d).unwrap().gf2_dim);
    }
}
