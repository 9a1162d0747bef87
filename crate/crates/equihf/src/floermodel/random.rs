//! Random valid data for property tests.
//!
//! Differentials are sampled among entries allowed by degree and action and
//! kept when they square to zero. The zero-energy terms are `1` and `ρ` plus
//! nullhomotopic corrections, higher levels of `d_eq` and all pants terms
//! come from the linear solver with a random point of the solution space.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Signed;
use rand::Rng;

use super::datum::{FixedPoint, FloerDatum, Mode, PeriodicPoint};
use super::solver::{solve_d_level, solve_pants, PantsTarget};
use super::validate::d_relation_residual;
use crate::error::{Error, Result};
use crate::morseflow::Sign;
use crate::scalars::{Gf2, Mat};
use crate::symplinalg::is_admissible;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomDatumSpec {
    pub mode: Mode,
    /// Upper bound on the number of generators of `CF(φ²)`.
    pub max_gens: usize,
    pub max_n: usize,
    /// Highest level of `d_eq` that may be nonzero.
    pub d_levels: usize,
}

impl Default for RandomDatumSpec {
    fn default() -> Self {
        RandomDatumSpec { mode: Mode::Exact, max_gens: 6, max_n: 3, d_levels: 3 }
    }
}

const ATTEMPTS: usize = 2000;

pub fn random_datum<R: Rng>(rng: &mut R, spec: &RandomDatumSpec) -> Result<FloerDatum> {
    if spec.max_gens == 0 || spec.max_n == 0 {
        return Err(Error::Range("random data need at least one generator and n >= 1".into()));
    }
    if spec.mode == Mode::Monotone && spec.max_gens < 2 {
        return Err(Error::Range("monotone random data are fixed-point free and need two generators".into()));
    }
    for _ in 0..ATTEMPTS {
        if let Some(d) = attempt(rng, spec) {
            return Ok(d);
        }
    }
    Err(Error::Precondition(format!("no consistent datum found in {ATTEMPTS} attempts")))
}

fn sign_of_degree(d: i64) -> i8 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn generators<R: Rng>(rng: &mut R, spec: &RandomDatumSpec) -> (usize, Vec<FixedPoint>, Vec<PeriodicPoint>, Vec<usize>) {
    let n = rng.random_range(1..=spec.max_n);
    let m = match spec.mode {
        Mode::Exact => rng.random_range(0..=spec.max_gens.min(3)),
        Mode::Monotone => 0,
    };
    let min_pairs = usize::from(m == 0);
    let pairs = rng.random_range(min_pairs..=(spec.max_gens - m) / 2);
    let mut phi = Vec::new();
    let mut phi2 = Vec::new();
    for j in 0..m {
        let degree = rng.random_range(-1..=2);
        let sign = sign_of_degree(degree);
        let admissible: Vec<i64> = (-(n as i64)..=n as i64).filter(|&k| is_admissible(sign, k, n)).collect();
        let kappa = admissible[rng.random_range(0..admissible.len())];
        let action = Rational64::from_integer(rng.random_range(0..=5));
        let name = format!("x{j}");
        phi.push(FixedPoint { name: name.clone(), degree, action, krein: Some(kappa), detsign: Some(sign) });
        phi2.push(PeriodicPoint { name, degree: 2 * degree - (n as i64 - kappa), action: action * 2 });
    }
    let mut rho: Vec<usize> = (0..m).collect();
    for j in 0..pairs {
        let degree = rng.random_range(-2..=3);
        let action = match spec.mode {
            Mode::Exact => Rational64::from_integer(rng.random_range(0..=12)),
            Mode::Monotone => Rational64::new(rng.random_range(0..=4), 4),
        };
        let base = phi2.len();
        phi2.push(PeriodicPoint { name: format!("z{j}a"), degree, action });
        phi2.push(PeriodicPoint { name: format!("z{j}b"), degree, action });
        rho.extend([base + 1, base]);
    }
    (n, phi, phi2, rho)
}

/// Half the smallest positive action gap, or `None` if two actions that
/// must be separated coincide.
fn epsilon(phi: &[FixedPoint], phi2: &[PeriodicPoint]) -> Option<Rational64> {
    let zero = Rational64::from_integer(0);
    let mut gaps = Vec::new();
    for a in phi {
        for b in phi {
            gaps.push((a.action - b.action).abs());
        }
    }
    for a in phi2 {
        for b in phi2 {
            gaps.push((a.action - b.action).abs());
        }
    }
    for y in phi2 {
        for a in phi {
            for b in phi {
                let diff = (y.action - a.action - b.action).abs();
                let diagonal = a.name == b.name && y.name == a.name;
                if diff == zero && !diagonal {
                    return None;
                }
                gaps.push(diff);
            }
        }
    }
    Some(gaps.into_iter().filter(|&g| g > zero).min().unwrap_or(Rational64::from_integer(2)) / 2)
}

/// A random matrix supported on `allowed`, kept only if `accept` holds.
fn sample<R: Rng>(rng: &mut R, k: usize, allowed: impl Fn(usize, usize) -> bool, accept: impl Fn(&Mat<Gf2>) -> bool) -> Mat<Gf2> {
    for _ in 0..12 {
        let m = Mat::from_fn(k, k, |r, c| Gf2(allowed(r, c) && rng.random_bool(0.4)));
        if accept(&m) {
            return m;
        }
    }
    Mat::zeros(k, k)
}

fn attempt<R: Rng>(rng: &mut R, spec: &RandomDatumSpec) -> Option<FloerDatum> {
    let (n, phi, phi2, rho) = generators(rng, spec);
    let epsilon = match spec.mode {
        Mode::Exact => epsilon(&phi, &phi2)?,
        Mode::Monotone => Rational64::from_integer(0),
    };
    let (m, k) = (phi.len(), phi2.len());
    let one = Rational64::from_integer(1);
    let increasing = |from: Rational64, to: Rational64| match spec.mode {
        Mode::Exact => to > from,
        Mode::Monotone => from - to < one,
    };
    let step = |from: i64, to: i64| to - from == 1;

    let d_phi =
        sample(rng, m, |r, c| step(phi[c].degree, phi[r].degree) && increasing(phi[c].action, phi[r].action), |x| x.mul(x).is_zero());
    let rho_mat = Mat::from_fn(k, k, |r, c| Gf2(rho[c] == r));
    let symmetrize = |x: &Mat<Gf2>| x.add(&rho_mat.mul(x).mul(&rho_mat));
    let raw = sample(
        rng,
        k,
        |r, c| step(phi2[c].degree, phi2[r].degree) && increasing(phi2[c].action, phi2[r].action),
        |x| {
            let s = symmetrize(x);
            s.mul(&s).is_zero()
        },
    );
    let d_phi2 = symmetrize(&raw);

    let mut d = FloerDatum { mode: spec.mode, n, epsilon, phi, phi2, rho, d_phi, d_phi2, d_eq: BTreeMap::new(), pants: BTreeMap::new() };

    let strictly = |from: Rational64, to: Rational64| to > from;
    let odd = |from: i64, to: i64| (to - from).rem_euclid(2) == 1;
    let homotopic = |rng: &mut R, base: Mat<Gf2>| {
        if spec.mode == Mode::Monotone || rng.random_bool(0.5) {
            return base;
        }
        let raw = sample(rng, k, |r, c| odd(d.phi2[c].degree, d.phi2[r].degree) && strictly(d.phi2[c].action, d.phi2[r].action), |_| true);
        let h = symmetrize(&raw);
        base.add(&d.d_phi2.mul(&h)).add(&h.mul(&d.d_phi2))
    };
    let plus = homotopic(rng, Mat::identity(k));
    let minus = homotopic(rng, rho_mat.clone());
    d.set_d_level(1, Sign::Plus, plus);
    d.set_d_level(1, Sign::Minus, minus);

    for i in 2..=spec.d_levels {
        let randomize = rng.random_bool(0.5);
        let (p, q) = if randomize { solve_d_level(&d, i, Some(&mut *rng))? } else { solve_d_level::<R>(&d, i, None)? };
        d.set_d_level(i, Sign::Plus, p);
        d.set_d_level(i, Sign::Minus, q);
    }
    let tail = (spec.d_levels + 1..=2 * spec.d_levels.max(1) + 1)
        .all(|i| [Sign::Plus, Sign::Minus].iter().all(|&s| d_relation_residual(&d, i, s).is_zero()));
    if !tail {
        return None;
    }

    if m > 0 {
        let levels = d.phi.iter().map(|p| (n as i64 - p.krein.unwrap_or(0)) as usize).max().unwrap_or(0) + 2;
        d.pants = solve_pants(&d, levels, PantsTarget::Krein, Some(&mut *rng))?;
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floermodel::{localized_check, smith_check, validate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_exact_data_are_valid_and_localize() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let d = random_datum(&mut rng, &RandomDatumSpec::default()).unwrap();
            assert!(d.k() <= 6);
            let v = validate(&d);
            assert!(v.is_valid(), "{:?}\n{}", v.failures(), d.to_text());
            assert!(localized_check(&d).unwrap().passes, "{}", d.to_text());
            let s = smith_check(&d).unwrap();
            assert!(s.chain_holds && s.quantum_holds, "{s:?}\n{}", d.to_text());
        }
    }

    #[test]
    fn random_monotone_data_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = RandomDatumSpec { mode: Mode::Monotone, ..RandomDatumSpec::default() };
        for _ in 0..40 {
            let d = random_datum(&mut rng, &spec).unwrap();
            assert_eq!(d.m(), 0);
            assert!(validate(&d).is_valid(), "{:?}", validate(&d).failures());
        }
    }
}
