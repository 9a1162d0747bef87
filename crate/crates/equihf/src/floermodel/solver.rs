//! Linear constraint solving for the unknown matrices of a datum.
//!
//! Once `d_φ`, `d_φ²` and the lower levels of `d_eq` are fixed, every
//! relation is linear in the remaining unknowns, so a datum can be completed
//! by Gaussian elimination over GF(2).

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use rand::Rng;

use super::datum::{FloerDatum, Mode, SIGNS};
use crate::morseflow::{relation_rhs, FaceTerm, Sign};
use crate::scalars::{BitMatrix, Gf2, HPoly, Mat};

type Key = (usize, Sign, usize, usize);

struct System {
    index: HashMap<Key, usize>,
    keys: Vec<Key>,
    rows: Vec<(Vec<usize>, bool)>,
}

impl System {
    fn new() -> Self {
        System { index: HashMap::new(), keys: Vec::new(), rows: Vec::new() }
    }

    fn add_var(&mut self, key: Key) {
        let next = self.keys.len();
        self.index.entry(key).or_insert_with(|| {
            self.keys.push(key);
            next
        });
    }

    fn var(&self, key: Key) -> Option<usize> {
        self.index.get(&key).copied()
    }

    fn push(&mut self, mut vars: Vec<usize>, rhs: bool) {
        vars.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(vars.len());
        for v in vars {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        if !reduced.is_empty() || rhs {
            self.rows.push((reduced, rhs));
        }
    }

    /// A solution, randomized over the affine solution space when `rng` is given.
    fn solve<R: Rng>(&self, rng: Option<&mut R>) -> Option<Vec<bool>> {
        let n = self.keys.len();
        if self.rows.is_empty() {
            let mut x = vec![false; n];
            if let Some(rng) = rng {
                x.iter_mut().for_each(|b| *b = rng.random());
            }
            return Some(x);
        }
        let mut a = BitMatrix::zeros(self.rows.len(), n);
        let mut b = vec![false; self.rows.len()];
        for (r, (vars, rhs)) in self.rows.iter().enumerate() {
            for &v in vars {
                a.set(r, v, true);
            }
            b[r] = *rhs;
        }
        if n == 0 {
            return b.iter().all(|x| !x).then(Vec::new);
        }
        let (mut x, kernel) = a.solve_affine(&b)?;
        if let Some(rng) = rng {
            for k in kernel {
                if rng.random::<bool>() {
                    x.iter_mut().zip(k).for_each(|(a, b)| *a ^= b);
                }
            }
        }
        Some(x)
    }
}

fn parity(x: i64) -> i64 {
    x.rem_euclid(2)
}

/// Positions `(y, a ⊗ b)` where `p^{i,σ}` may be nonzero: degree preserved
/// mod 2, and in exact mode the action strictly increases off the diagonal.
pub fn pants_allowed(d: &FloerDatum, i: usize, sigma: Sign, y: usize, c: usize) -> bool {
    if i == 0 && sigma == Sign::Minus {
        return false;
    }
    let m = d.m();
    let (a, b) = (c / m, c % m);
    if parity(d.phi2[y].degree + i as i64) != parity(d.phi[a].degree + d.phi[b].degree) {
        return false;
    }
    if d.mode == Mode::Exact {
        let diff = d.phi2[y].action - d.phi[a].action - d.phi[b].action;
        let diagonal = a == b && d.phi2[y].name == d.phi[a].name;
        return diff > Rational64::from_integer(0) || (diagonal && diff == Rational64::from_integer(0));
    }
    true
}

/// Positions where the action-increasing part of `d_eq^{i,σ}` may be nonzero.
pub fn d_eq_allowed(d: &FloerDatum, i: usize, r: usize, c: usize) -> bool {
    if parity(d.phi2[r].degree) != parity(d.phi2[c].degree + 1 - i as i64) {
        return false;
    }
    let (ar, ac) = (d.phi2[r].action, d.phi2[c].action);
    match d.mode {
        Mode::Exact => ar > ac,
        Mode::Monotone => ac - (ar - i as i64) < Rational64::from_integer(1),
    }
}

/// What the pants unknowns must add up to.
pub enum PantsTarget<'a> {
    /// `p^{i,+} + p^{i,-}` is the `h^i` coefficient of the given matrix.
    Totals(&'a Mat<HPoly>),
    /// The diagonal coefficient of `x ⊗ x -> x` is `h^{n - κ(x)}`; all else free.
    Krein,
}

/// Solve the pants relations for `p^{i,σ}`, `0 ≤ i ≤ levels`, with `d_eq` fixed.
///
/// Relations are imposed up to `levels + max level of d_eq + 1`, where every
/// term vanishes. Without `rng` the solution has all free variables zero.
pub fn solve_pants<R: Rng>(
    d: &FloerDatum,
    levels: usize,
    target: PantsTarget<'_>,
    rng: Option<&mut R>,
) -> Option<BTreeMap<(usize, Sign), Mat<Gf2>>> {
    let (m, k) = (d.m(), d.k());
    let mm = m * m;
    let mut sys = System::new();
    for i in 0..=levels {
        for s in SIGNS {
            for y in 0..k {
                for c in 0..mm {
                    if pants_allowed(d, i, s, y, c) {
                        sys.add_var((i, s, y, c));
                    }
                }
            }
        }
    }
    let dt = d.tensor_differential();
    let swap_col = |c: usize| (c % m) * m + c / m;
    let d_levels: BTreeMap<(usize, Sign), Mat<Gf2>> = d.d_eq.clone();
    for i in 0..=levels + d.d_eq_max() + 1 {
        for sigma in SIGNS {
            let terms = relation_rhs(i, sigma);
            for y in 0..k {
                for c in 0..mm {
                    let mut vars = Vec::new();
                    for t in 0..k {
                        if d.d_phi2.get(y, t).0 {
                            vars.extend(sys.var((i, sigma, t, c)));
                        }
                    }
                    for u in 0..mm {
                        if dt.get(u, c).0 {
                            vars.extend(sys.var((i, sigma, y, u)));
                        }
                    }
                    for term in &terms {
                        match *term {
                            FaceTerm::Zero => {}
                            FaceTerm::Pants { i: a, sign, swap } => {
                                vars.extend(sys.var((a, sign, y, if swap { swap_col(c) } else { c })));
                            }
                            FaceTerm::Compose { d_i, d_sign, p_i, p_sign } => {
                                if let Some(dm) = d_levels.get(&(d_i, d_sign)) {
                                    for t in 0..k {
                                        if dm.get(y, t).0 {
                                            vars.extend(sys.var((p_i, p_sign, t, c)));
                                        }
                                    }
                                }
                            }
                        }
                    }
                    sys.push(vars, false);
                }
            }
        }
    }
    match target {
        PantsTarget::Totals(total) => {
            if total.shape() != (k, mm) {
                return None;
            }
            for y in 0..k {
                for c in 0..mm {
                    let p = total.get(y, c);
                    if p.degree().is_some_and(|deg| deg > levels) {
                        return None;
                    }
                    for i in 0..=levels {
                        let vars = SIGNS.iter().filter_map(|&s| sys.var((i, s, y, c))).collect();
                        sys.push(vars, p.coeff(i));
                    }
                }
            }
        }
        PantsTarget::Krein => {
            for (x, &j) in d.embedding().iter().enumerate() {
                let Some(kappa) = d.phi[x].krein else { continue };
                let exponent = d.n as i64 - kappa;
                for i in 0..=levels {
                    let vars = SIGNS.iter().filter_map(|&s| sys.var((i, s, j, x * m + x))).collect();
                    sys.push(vars, i as i64 == exponent);
                }
            }
        }
    }
    let x = sys.solve(rng)?;
    let mut out = BTreeMap::new();
    for (v, &(i, s, y, c)) in sys.keys.iter().enumerate() {
        if x[v] {
            out.entry((i, s)).or_insert_with(|| Mat::zeros(k, mm)).set(y, c, Gf2::ONE);
        }
    }
    Some(out)
}

/// Solve the `d_eq` relations at level `i` for the two unknowns `d_eq^{i,±}`,
/// with every lower level fixed.
pub fn solve_d_level<R: Rng>(d: &FloerDatum, i: usize, rng: Option<&mut R>) -> Option<(Mat<Gf2>, Mat<Gf2>)> {
    let k = d.k();
    let mut sys = System::new();
    for s in SIGNS {
        for r in 0..k {
            for c in 0..k {
                if d_eq_allowed(d, i, r, c) {
                    sys.add_var((i, s, r, c));
                }
            }
        }
    }
    for sigma in SIGNS {
        let mut constant = Mat::<Gf2>::zeros(k, k);
        for a in 1..i {
            for tau in SIGNS {
                constant = constant.add(&d.d_level(a, tau).mul(&d.d_level(i - a, tau.times(sigma))));
            }
        }
        for r in 0..k {
            for c in 0..k {
                let mut vars = Vec::new();
                for t in 0..k {
                    if d.d_phi2.get(r, t).0 {
                        vars.extend(sys.var((i, sigma, t, c)));
                    }
                    if d.d_phi2.get(t, c).0 {
                        vars.extend(sys.var((i, sigma, r, t)));
                    }
                }
                sys.push(vars, constant.get(r, c).0);
            }
        }
    }
    let x = sys.solve(rng)?;
    let mut plus = Mat::zeros(k, k);
    let mut minus = Mat::zeros(k, k);
    for (v, &(_, s, r, c)) in sys.keys.iter().enumerate() {
        if x[v] {
            match s {
                Sign::Plus => plus.set(r, c, Gf2::ONE),
                Sign::Minus => minus.set(r, c, Gf2::ONE),
            }
        }
    }
    Some((plus, minus))
}
