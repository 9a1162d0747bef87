//! Homological perturbation for free involutions.
//!
//! When `ρ` has no fixed points, `CF(φ²)[h]` with `δ = h(1 + ρ)` deformation
//! retracts onto the span `D` of one generator from each orbit. Perturbing
//! by `d_eq - δ` gives a differential on `D` whose cohomology is `HF_eq^poly`.

use serde::Serialize;

use super::analysis::hf_poly_invariants;
use super::datum::{FloerDatum, Mode};
use crate::error::{Error, Result};
use crate::scalars::{Gf2, HPoly, Mat};

type Vector = Vec<HPoly>;

/// Test elements `x h^j` use `j` up to this power.
const TEST_POWERS: usize = 3;

struct Retraction<'a> {
    rho: &'a [usize],
    plus: Vec<usize>,
}

impl Retraction<'_> {
    fn include(&self, v: &[HPoly]) -> Vector {
        let mut out = vec![HPoly::zero(); self.rho.len()];
        for (slot, &x) in self.plus.iter().enumerate() {
            out[x] = out[x].add(&v[slot]);
            out[self.rho[x]] = out[self.rho[x]].add(&v[slot]);
        }
        out
    }

    fn project(&self, v: &[HPoly]) -> Vector {
        self.plus.iter().map(|&x| HPoly::from_bit(v[x].constant_term())).collect()
    }

    fn homotopy(&self, v: &[HPoly]) -> Vector {
        let mut out = vec![HPoly::zero(); self.rho.len()];
        for &x in &self.plus {
            out[self.rho[x]] = out[self.rho[x]].add(&v[x].shr(1));
        }
        out
    }

    fn delta(&self, v: &[HPoly]) -> Vector {
        (0..v.len()).map(|x| v[x].add(&v[self.rho[x]]).shl(1)).collect()
    }
}

fn add(a: &[HPoly], b: &[HPoly]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn is_zero(v: &[HPoly]) -> bool {
    v.iter().all(HPoly::is_zero)
}

fn basis(len: usize, i: usize, power: usize) -> Vector {
    let mut v = vec![HPoly::zero(); len];
    v[i] = HPoly::monomial(power);
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub plus_set: Vec<String>,
    /// Rows of the differential on `D` as bit strings, columns are sources.
    pub d_transferred: Vec<String>,
    pub side_conditions: Vec<SideCondition>,
    pub iterations: usize,
    pub iteration_bound: usize,
    pub h_dim: usize,
    pub orbit_count: usize,
    pub hf_poly_dim: Option<usize>,
    pub consistent: bool,
}

/// One generator per orbit: the first of each pair, unless names are given.
fn choose_plus(d: &FloerDatum, names: Option<&[String]>) -> Result<Vec<usize>> {
    let Some(names) = names else {
        return Ok((0..d.k()).filter(|&x| x < d.rho[x]).collect());
    };
    let mut plus = Vec::new();
    for n in names {
        let x = d
            .phi2
            .iter()
            .position(|p| &p.name == n)
            .ok_or_else(|| Error::Precondition(format!("unknown generator '{n}' in the plus set")))?;
        plus.push(x);
    }
    let mut orbits: Vec<usize> = plus.iter().map(|&x| x.min(d.rho[x])).collect();
    orbits.sort_unstable();
    orbits.dedup();
    if orbits.len() != plus.len() || plus.len() * 2 != d.k() {
        return Err(Error::Precondition("the plus set must contain exactly one generator from each orbit".into()));
    }
    Ok(plus)
}

pub fn transfer(d: &FloerDatum, plus_names: Option<&[String]>) -> Result<TransferReport> {
    if d.mode != Mode::Monotone {
        return Err(Error::Precondition("transfer needs a monotone datum".into()));
    }
    if d.m() > 0 || (0..d.k()).any(|x| d.rho[x] == x) {
        return Err(Error::Precondition("transfer needs rho without fixed points".into()));
    }
    let k = d.k();
    let dm = d.d_eq_poly();
    if !dm.mul(&dm).is_zero() {
        return Err(Error::Precondition("d_eq does not square to zero".into()));
    }
    let plus = choose_plus(d, plus_names)?;
    let t = Retraction { rho: &d.rho, plus: plus.clone() };

    let rho = d.rho_matrix().map(|b| HPoly::from_bit(b.0));
    let delta_mat = Mat::<HPoly>::identity(k).add(&rho).scale(&HPoly::monomial(1));
    let pert = dm.add(&delta_mat);

    let i_max = d.d_eq_max();
    let actions = d.phi2_actions();
    let spread = match (actions.iter().min(), actions.iter().max()) {
        (Some(lo), Some(hi)) => (*hi - *lo).ceil().to_integer().max(0) as usize,
        _ => 0,
    };
    let bound = k * (i_max + 1) * (spread + 1);

    let half = plus.len();
    let mut d_d = Mat::<Gf2>::zeros(half, half);
    let mut iterations = 0;
    for slot in 0..half {
        let mut v = pert.apply(&t.include(&basis(half, slot, 0)));
        let mut acc = t.project(&v);
        let mut steps = 0;
        while !is_zero(&v) {
            steps += 1;
            if steps > bound {
                return Err(Error::NotNilpotent(bound));
            }
            v = pert.apply(&t.homotopy(&v));
            acc = add(&acc, &t.project(&v));
        }
        iterations = iterations.max(steps);
        for (r, p) in acc.iter().enumerate() {
            d_d.set(r, slot, Gf2(p.constant_term()));
        }
    }

    let big: Vec<Vector> = (0..k).flat_map(|x| (0..=TEST_POWERS).map(move |j| basis(k, x, j))).collect();
    let small: Vec<Vector> = (0..half).map(|s| basis(half, s, 0)).collect();
    let conditions = [
        ("p i = 1", small.iter().all(|v| t.project(&t.include(v)) == *v)),
        ("p k = 0", big.iter().all(|v| is_zero(&t.project(&t.homotopy(v))))),
        ("k i = 0", small.iter().all(|v| is_zero(&t.homotopy(&t.include(v))))),
        ("k k = 0", big.iter().all(|v| is_zero(&t.homotopy(&t.homotopy(v))))),
        ("delta i = 0", small.iter().all(|v| is_zero(&t.delta(&t.include(v))))),
        ("p delta = 0", big.iter().all(|v| is_zero(&t.project(&t.delta(v))))),
        (
            "i p = 1 + delta k + k delta",
            big.iter().all(|v| {
                let rhs = add(&add(v, &t.delta(&t.homotopy(v))), &t.homotopy(&t.delta(v)));
                t.include(&t.project(v)) == rhs
            }),
        ),
    ];
    let side_conditions: Vec<SideCondition> = conditions.into_iter().map(|(name, holds)| SideCondition { name, holds }).collect();

    let squares_to_zero = d_d.mul(&d_d).is_zero();
    let h_dim = half - 2 * d_d.rank();
    let hf = hf_poly_invariants(d)?;
    Ok(TransferReport {
        plus_set: plus.iter().map(|&x| d.phi2[x].name.clone()).collect(),
        consistent: squares_to_zero && side_conditions.iter().all(|c| c.holds) && hf.gf2_dim == Some(h_dim) && h_dim <= half,
        d_transferred: (0..half).map(|r| (0..half).map(|c| if d_d.get(r, c).0 { '1' } else { '0' }).collect()).collect(),
        side_conditions,
        iterations,
        iteration_bound: bound,
        h_dim,
        orbit_count: half,
        hf_poly_dim: hf.gf2_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floermodel::{clifford, morse_pair, random_datum, RandomDatumSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn clifford_transfers_to_zero_differential() {
        let r = transfer(&clifford(), None).unwrap();
        assert_eq!(r.d_transferred, vec!["00", "00"]);
        assert_eq!(r.h_dim, 2);
        assert!(r.consistent, "{r:?}");
        let names = vec!["x++".to_string(), "x+-".to_string()];
        assert!(transfer(&clifford(), Some(&names)).unwrap().consistent);
    }

    #[test]
    fn rejects_fixed_points_and_bad_plus_sets() {
        assert!(transfer(&morse_pair(1, 1).unwrap(), None).is_err());
        let names = vec!["x++".to_string(), "x--".to_string()];
        assert!(transfer(&clifford(), Some(&names)).is_err());
    }

    #[test]
    fn random_free_data_transfer_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = RandomDatumSpec { mode: Mode::Monotone, ..RandomDatumSpec::default() };
        for _ in 0..40 {
            let d = random_datum(&mut rng, &spec).unwrap();
            let r = transfer(&d, None).unwrap();
            assert!(r.consistent, "{}\n{r:?}", d.to_text());
        }
    }
}
