//! Acceptance criteria, one line each: `criterion N: PASS` or `criterion N: FAIL`.
//!
//! Runs without the libtest harness so that the output stays one line per
//! criterion. Randomized criteria use `EQUIHF_SEED` when it is set.

mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use equihf::equivariant::random::{random_complex, random_involutive, Family, RandomSpec};
use equihf::equivariant::{group_cohomology, kaledin_check, smith_bound_check, tate_dimension, verify_u_sequence};
use equihf::floermodel::{
    annulus, clifford, hf_eq_invariants, hf_poly_invariants, localized_check, morse_pair, random_datum, smith_check, spectral_checks,
    transfer, twisted_pair, validate, zero_diagonal, Builtin, FloerDatum, RandomDatumSpec,
};
use equihf::morseflow::{codim1_faces, corner_count, enumerate_strata, relation_string, Sign, Space};
use equihf::scalars::{Gf2, Mat};
use equihf::symplinalg::{
    build_blocks, component_invariant, is_admissible, krein_index, local_constancy_holds, random_blocks, representative_for,
    verify_cz_krein, Tolerances,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;

fn seed() -> u64 {
    std::env::var("EQUIHF_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn clifford_invariants() -> Outcome {
    let d = clifford();
    let poly = hf_poly_invariants(&d).map_err(|e| e.to_string())?;
    ensure(poly.invariant_factors == ["1+h^2"], || format!("invariant factors {:?}", poly.invariant_factors))?;
    ensure(poly.free_rank == 0 && poly.gf2_dim == Some(2), || format!("{poly:?}"))?;
    let eq = hf_eq_invariants(&d).map_err(|e| e.to_string())?;
    ensure(eq.is_zero(), || format!("HF_eq = {eq:?}"))?;
    Ok("HF_poly = K[h]/(1+h^2), dim 2; HF_eq = 0".into())
}

fn clifford_transfer() -> Outcome {
    let d = clifford();
    let t = transfer(&d, None).map_err(|e| e.to_string())?;
    ensure(t.d_transferred.iter().all(|row| row.chars().all(|c| c == '0')), || format!("d_D = {:?}", t.d_transferred))?;
    ensure(t.h_dim == 2 && t.hf_poly_dim == Some(2), || format!("dim H(D) = {}, HF_poly {:?}", t.h_dim, t.hf_poly_dim))?;
    ensure(t.orbit_count <= 2 && t.h_dim <= t.orbit_count, || format!("{} orbits", t.orbit_count))?;
    ensure(t.side_conditions.iter().all(|c| c.holds), || "side condition failed".into())?;
    Ok(format!("d_D = 0, dim H(D) = 2, {} free orbits", t.orbit_count))
}

fn localization_data() -> Vec<(String, FloerDatum)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for i in 1..=2 * n {
            out.push((format!("morse_pair({i},{n})"), morse_pair(i, n).unwrap()));
        }
        for i in 2..2 * n {
            out.push((format!("twisted_pair({i},{n})"), twisted_pair(i, n).unwrap()));
        }
    }
    out.push(("annulus".into(), annulus()));
    out
}

fn localization() -> Outcome {
    let data = localization_data();
    let mut broken = 0;
    for (name, d) in &data {
        let l = localized_check(d).map_err(|e| format!("{name}: {e}"))?;
        ensure(l.passes && l.bijective, || format!("{name} does not localize: {l:?}"))?;
        for x in 0..d.m() {
            let z = localized_check(&zero_diagonal(d, x)).map_err(|e| format!("{name}: {e}"))?;
            ensure(!z.passes, || format!("{name} still localizes with the diagonal at {} removed", d.phi[x].name))?;
            broken += 1;
        }
    }
    Ok(format!("{} data localize, {broken} zeroed diagonals detected", data.len()))
}

fn constraint_patterns() -> Outcome {
    let (mut shifted, mut same_k) = (0, 0);
    for (name, d) in localization_data() {
        let [x, y] = &d.phi[..] else {
            return Err(format!("{name} does not have two fixed points"));
        };
        let (sx, kx, sy, ky) = (x.detsign.unwrap(), x.krein.unwrap(), y.detsign.unwrap(), y.krein.unwrap());
        ensure(sx == -sy, || format!("{name}: signs {sx}, {sy}"))?;
        match (kx - ky).abs() {
            1 => shifted += 1,
            0 => same_k += 1,
            _ => return Err(format!("{name}: kappa {kx}, {ky}")),
        }
        for p in 0..2 {
            let v = validate(&zero_diagonal(&d, p));
            let failures = v.failures();
            ensure(failures.contains(&"pants_relations") && failures.contains(&"pants_chain_map"), || {
                format!("{name} with c at {} removed: {failures:?}", d.phi[p].name)
            })?;
        }
    }
    ensure(shifted > 0 && same_k > 0, || format!("patterns seen: {shifted} shifted, {same_k} equal kappa"))?;
    Ok(format!("c(s,k) = c(-s,k+1) forced on {shifted} data, c(+,k) = c(-,k) on {same_k}"))
}

fn krein_cz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    for n in 1..=3 {
        for sample in 0..100 {
            let blocks = random_blocks(&mut rng, n);
            let r = verify_cz_krein(&blocks, None, Tolerances::default()).map_err(|e| format!("n = {n}, sample {sample}: {e}"))?;
            ensure(r.holds, || format!("{blocks:?}: {} != {}", r.lhs, r.rhs))?;
            ensure(r.kappa_parity && r.mu_parity, || format!("{blocks:?}: parity {r:?}"))?;
        }
    }
    for sample in 0..100 {
        let n = 1 + sample % 3;
        let a = build_blocks(&random_blocks(&mut rng, n), Tolerances::default()).map_err(|e| e.to_string())?;
        ensure(local_constancy_holds(&mut rng, &a, 1e-6).map_err(|e| e.to_string())?, || format!("kappa jumps near {}", a.m))?;
    }
    Ok("300 block sums, 100 perturbations".into())
}

fn classification() -> Outcome {
    let (mut realized, mut rejected) = (0, 0);
    for n in 1..=4 {
        for s in [1i8, -1] {
            for k in -(n as i64) - 2..=n as i64 + 2 {
                match (is_admissible(s, k, n), representative_for(s, k, n)) {
                    (true, Ok(a)) => {
                        let c = component_invariant(&a).map_err(|e| e.to_string())?;
                        ensure(c.sign == s && c.kappa == k, || format!("({s}, {k}) in dim {n} came back as ({}, {})", c.sign, c.kappa))?;
                        ensure(krein_index(&a).map(|r| r.kappa).ok() == Some(k), || format!("krein_index disagrees at ({s}, {k})"))?;
                        realized += 1;
                    }
                    (false, Err(_)) => rejected += 1,
                    (true, Err(e)) => return Err(format!("({s}, {k}) in dim {n}: {e}")),
                    (false, Ok(_)) => return Err(format!("({s}, {k}) in dim {n} is inadmissible but was realized")),
                }
            }
        }
    }
    Ok(format!("{realized} components realized, {rejected} pairs rejected"))
}

fn morse_combinatorics() -> Outcome {
    for i in 1..=8 {
        for sigma in [Sign::Plus, Sign::Minus] {
            let strata = enumerate_strata(Space::P, i, sigma, None).map_err(|e| e.to_string())?;
            let corners = strata.iter().filter(|s| s.dim() == 0).count() as u64;
            ensure(corners == corner_count(i) && corners == (1 << (i - 1)) * (i as u64 + 1), || format!("i = {i}: {corners} corners"))?;
            let faces = codim1_faces(i, sigma).len();
            ensure(faces == 4 * i - 2, || format!("i = {i}: {faces} faces"))?;
        }
    }
    for (i, sigma) in [(1, Sign::Plus), (1, Sign::Minus), (2, Sign::Plus)] {
        let ours = relation_string(i, sigma);
        let reference = oracles::reference_relation(i, sigma == Sign::Plus).unwrap();
        ensure(ours.split_whitespace().eq(reference.split_whitespace()), || format!("i = {i}, {sigma}: {ours}"))?;
    }
    Ok("corners and faces for i <= 8, three relations token for token".into())
}

fn equivariant_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let families = [Family::Any, Family::Acyclic, Family::LevelwiseFree];
    for round in 0..200 {
        let family = families[round % 3];
        let w = random_involutive(&mut rng, &RandomSpec { max_dim: 8, family, general_involution: round % 2 == 1 });
        let inv = group_cohomology(&w);
        if family == Family::LevelwiseFree {
            ensure(tate_dimension(&w) == 0, || format!("round {round}: Tate cohomology of a free action"))?;
        }
        if family == Family::Acyclic {
            ensure(inv.is_zero(), || format!("round {round}: acyclic complex with {inv:?}"))?;
        }
        let s = smith_bound_check(&w);
        ensure(s.holds && s.generator_count <= w.cohomology().dim(), || format!("round {round}: {s:?}"))?;
        ensure(verify_u_sequence(&w).exact, || format!("round {round}: u-sequence not exact"))?;
    }
    for round in 0..200 {
        let c = random_complex(&mut rng, 6);
        ensure(kaledin_check(&c).bijective, || format!("round {round}: squaring map not bijective"))?;
    }
    Ok("200 involutive complexes, 200 squaring maps".into())
}

fn predicted_e2(d: &FloerDatum, n: usize) -> Vec<usize> {
    let bits = |m: &Mat<Gf2>| -> Vec<Vec<u8>> { (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).0 as u8).collect()).collect() };
    let dd = bits(&d.d_phi2);
    let rho: Vec<Vec<u8>> = (0..d.k()).map(|r| (0..d.k()).map(|c| (d.rho[c] == r) as u8).collect()).collect();
    let h = d.k() - 2 * oracles::rank_gf2(&dd);
    let r = (2 * h - oracles::borel_truncated_dim(&dd, &rho, 2)) / 2;
    (0..n - 1).map(|j| if j == 0 { h - r } else { h - 2 * r }).collect()
}

fn spectral() -> Outcome {
    let catalogue = Builtin::catalogue();
    for b in &catalogue {
        let d = b.build().map_err(|e| e.to_string())?;
        let s = spectral_checks(&d).map_err(|e| format!("{b}: {e}"))?;
        ensure(s.h_adic_agrees, || format!("{b}: E2 {:?}, group cohomology {:?}", s.e2_levels, s.e2_expected))?;
        ensure(s.e2_levels == predicted_e2(&d, s.truncation), || format!("{b}: E2 {:?} against ranks", s.e2_levels))?;
        ensure(s.action_agrees, || format!("{b}: action E1 {:?}, dim CF(phi) {}", s.action_e1, s.action_e1_expected))?;
    }
    Ok(format!("{} built-in data", catalogue.len()))
}

fn smith() -> Outcome {
    let mut data: Vec<(String, FloerDatum)> = Builtin::catalogue().into_iter().map(|b| (b.to_string(), b.build().unwrap())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    for k in 0..100 {
        let d = random_datum(&mut rng, &RandomDatumSpec::default()).map_err(|e| e.to_string())?;
        ensure(validate(&d).is_valid(), || format!("random datum {k} is invalid"))?;
        ensure(d.k() <= 6, || format!("random datum {k} has {} generators", d.k()))?;
        data.push((format!("random {k}"), d));
    }
    for (name, d) in &data {
        let s = smith_check(d).map_err(|e| format!("{name}: {e}"))?;
        ensure(s.chain_holds && s.quantum_holds, || format!("{name}: {s:?}"))?;
    }
    Ok(format!("{} data", data.len()))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Clifford torus invariants", 1, clifford_invariants),
        ("transfer on the Clifford torus", 1, clifford_transfer),
        ("localization instances", 5, localization),
        ("constraint patterns", 5, constraint_patterns),
        ("Krein and Conley-Zehnder", 10, krein_cz),
        ("component classification", 5, classification),
        ("Morse combinatorics", 1, morse_combinatorics),
        ("equivariant algebra suite", 30, equivariant_suite),
        ("spectral sequence cross-check", 10, spectral),
        ("Smith inequalities", 30, smith),
    ];
    let mut all = true;
    for (k, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*budget) => Err(format!("took {elapsed:.2?}, budget {budget} s")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail} ({elapsed:.2?})", k + 1),
            Err(why) => {
                all = false;
                println!("criterion {}: FAIL  {title}: {why} ({elapsed:.2?})", k + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
