use num_rational::Rational64;
use serde::Serialize;

use super::datum::{FloerDatum, Mode, SIGNS};
use crate::morseflow::{relation_rhs, FaceTerm, Sign};
use crate::scalars::{Gf2, HPoly, Mat};
use crate::symplinalg::is_admissible;

const MAX_DIAGNOSTICS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, name: &'static str, mut diagnostics: Vec<String>) {
        let extra = diagnostics.len().saturating_sub(MAX_DIAGNOSTICS);
        if extra > 0 {
            diagnostics.truncate(MAX_DIAGNOSTICS);
            diagnostics.push(format!("... and {extra} more"));
        }
        self.checks.push(Check { name, passed: diagnostics.is_empty(), diagnostics });
    }
}

fn parity(x: i64) -> i64 {
    x.rem_euclid(2)
}

/// `d D^{i,σ} + D^{i,σ} d + Σ D^{a,τ} D^{b,τσ}` over `a + b = i` with `a, b ≥ 1`.
pub fn d_relation_residual(d: &FloerDatum, i: usize, sigma: Sign) -> Mat<Gf2> {
    let di = d.d_level(i, sigma);
    let mut out = d.d_phi2.mul(&di).add(&di.mul(&d.d_phi2));
    for a in 1..i {
        for tau in SIGNS {
            out = out.add(&d.d_level(a, tau).mul(&d.d_level(i - a, tau.times(sigma))));
        }
    }
    out
}

/// `d_φ² p^{i,σ} + p^{i,σ} (d ⊗ 1 + 1 ⊗ d)` plus every face term of the relation.
pub fn pants_relation_residual(d: &FloerDatum, i: usize, sigma: Sign) -> Mat<Gf2> {
    let p = d.pants_level(i, sigma);
    let mut out = d.d_phi2.mul(&p).add(&p.mul(&d.tensor_differential()));
    let swap = d.swap_matrix();
    for term in relation_rhs(i, sigma) {
        match term {
            FaceTerm::Zero => {}
            FaceTerm::Pants { i: a, sign, swap: s } => {
                let q = d.pants_level(a, sign);
                out = out.add(&if s { q.mul(&swap) } else { q });
            }
            FaceTerm::Compose { d_i, d_sign, p_i, p_sign } => {
                out = out.add(&d.d_level(d_i, d_sign).mul(&d.pants_level(p_i, p_sign)));
            }
        }
    }
    out
}

/// Highest level at which a relation can be nonzero given the stored terms.
pub fn relation_horizon(d: &FloerDatum) -> usize {
    d.pants_max() + d.d_eq_max() + 1
}

/// The Borel differential `d ⊗ 1 + 1 ⊗ d + h (1 + swap)` on `CF(φ) ⊗ CF(φ)`.
pub fn borel_tensor_differential(d: &FloerDatum) -> Mat<HPoly> {
    let norm = d.swap_matrix().add(&Mat::identity(d.m() * d.m()));
    let mut out: Mat<HPoly> = d.tensor_differential().map(|b| HPoly::from_bit(b.0));
    for (r, c, _) in norm.nonzero_entries() {
        out.add_to(r, c, &HPoly::monomial(1));
    }
    out
}

fn pair_name(d: &FloerDatum, col: usize) -> String {
    let m = d.m();
    format!("{}⊗{}", d.phi[col / m].name, d.phi[col % m].name)
}

fn entries<F: Fn(usize, usize) -> String>(m: &Mat<Gf2>, f: F) -> Vec<String> {
    m.nonzero_entries().map(|(r, c, _)| f(r, c)).collect()
}

/// Check every structural, grading, action and relation invariant of a datum.
pub fn validate(d: &FloerDatum) -> ValidationReport {
    let mut rec = Recorder { checks: Vec::new() };
    let (m, k) = (d.m(), d.k());
    let phi_name = |i: usize| d.phi[i].name.clone();
    let phi2_name = |i: usize| d.phi2[i].name.clone();
    let emb = d.embedding();

    rec.push("structure", d.check_structure().err().map(|e| e.to_string()).into_iter().collect());

    rec.push("d_phi_squared", entries(&d.d_phi.mul(&d.d_phi), |r, c| format!("d²({}) has a {} term", phi_name(c), phi_name(r))));
    rec.push("d_phi2_squared", entries(&d.d_phi2.mul(&d.d_phi2), |r, c| format!("d²({}) has a {} term", phi2_name(c), phi2_name(r))));

    let odd = |mat: &Mat<Gf2>, deg: &dyn Fn(usize) -> i64, name: &dyn Fn(usize) -> String, shift: i64| -> Vec<String> {
        mat.nonzero_entries()
            .filter(|&(r, c, _)| parity(deg(r)) != parity(deg(c) + shift))
            .map(|(r, c, _)| format!("{} -> {} does not have degree {shift} mod 2", name(c), name(r)))
            .collect()
    };
    rec.push("d_phi_degree", odd(&d.d_phi, &|i| d.phi[i].degree, &phi_name, 1));
    rec.push("d_phi2_degree", odd(&d.d_phi2, &|i| d.phi2[i].degree, &phi2_name, 1));

    let mut rho_diag = Vec::new();
    for (a, &b) in d.rho.iter().enumerate() {
        if a < b {
            if parity(d.phi2[a].degree) != parity(d.phi2[b].degree) {
                rho_diag.push(format!("rho exchanges {} and {} of different parity", phi2_name(a), phi2_name(b)));
            }
            if d.phi2[a].action != d.phi2[b].action {
                rho_diag.push(format!("rho exchanges {} and {} of different action", phi2_name(a), phi2_name(b)));
            }
        }
    }
    rec.push("rho_invariance", rho_diag);

    let mut deq_degree = Vec::new();
    for (&(i, s), mat) in &d.d_eq {
        deq_degree.extend(odd(mat, &|j| d.phi2[j].degree, &phi2_name, 1 - i as i64).into_iter().map(|e| format!("d_eq^{{{i},{s}}}: {e}")));
    }
    rec.push("d_eq_degree", deq_degree);

    let actions2 = d.phi2_actions();
    let rho_m = d.rho_matrix();
    let id = Mat::<Gf2>::identity(k);
    match d.mode {
        Mode::Exact => {
            let mut doubling = Vec::new();
            for (x, &j) in emb.iter().enumerate() {
                if actions2[j] != d.phi[x].action * 2 {
                    doubling.push(format!("A_phi2({}) = {} is not twice A_phi = {}", phi_name(x), actions2[j], d.phi[x].action));
                }
            }
            rec.push("action_doubling", doubling);

            let two_eps = d.epsilon * 2;
            let gap = |vals: &[Rational64], names: &dyn Fn(usize) -> String| -> Vec<String> {
                let mut out = Vec::new();
                if d.epsilon <= Rational64::from_integer(0) {
                    out.push("epsilon must be positive".into());
                }
                for a in 0..vals.len() {
                    for b in 0..vals.len() {
                        let diff = vals[a] - vals[b];
                        if diff > Rational64::from_integer(0) && diff < two_eps {
                            out.push(format!("A({}) - A({}) = {diff} lies in (0, 2 epsilon)", names(a), names(b)));
                        }
                    }
                }
                out
            };
            let a1: Vec<Rational64> = d.phi.iter().map(|p| p.action).collect();
            rec.push("action_gap_phi", gap(&a1, &phi_name));
            rec.push("action_gap_phi2", gap(&actions2, &phi2_name));
            let mut nc = Vec::new();
            for (y, &ay) in actions2.iter().enumerate().take(k) {
                for a in 0..m {
                    for b in 0..m {
                        if a == b && emb[a] == y {
                            continue;
                        }
                        let diff = ay - a1[a] - a1[b];
                        if diff > -two_eps && diff < two_eps {
                            nc.push(format!(
                                "A({}) - A({}) - A({}) = {diff} lies in (-2 epsilon, 2 epsilon)",
                                phi2_name(y),
                                phi_name(a),
                                phi_name(b)
                            ));
                        }
                    }
                }
            }
            rec.push("non_coincident", nc);

            let increasing = |mat: &Mat<Gf2>, vals: &[Rational64], names: &dyn Fn(usize) -> String| -> Vec<String> {
                mat.nonzero_entries()
                    .filter(|&(r, c, _)| vals[r] <= vals[c])
                    .map(|(r, c, _)| format!("{} -> {} does not increase the action", names(c), names(r)))
                    .collect()
            };
            rec.push("d_phi_action", increasing(&d.d_phi, &a1, &phi_name));
            rec.push("d_phi2_action", increasing(&d.d_phi2, &actions2, &phi2_name));
            let mut ze = Vec::new();
            for (&(i, s), mat) in &d.d_eq {
                let rest = match (i, s) {
                    (1, Sign::Plus) => mat.add(&id),
                    (1, Sign::Minus) => mat.add(&rho_m),
                    _ => mat.clone(),
                };
                ze.extend(increasing(&rest, &actions2, &phi2_name).into_iter().map(|e| format!("d_eq^{{{i},{s}}}: {e}")));
            }
            for s in SIGNS {
                if !d.d_eq.contains_key(&(1, s)) && k > 0 {
                    ze.push(format!("d_eq^{{1,{s}}} is missing its zero-energy part"));
                }
            }
            rec.push("d_eq_zero_energy", ze);
        }
        Mode::Monotone => {
            let delta = rho_m.add(&id);
            let poly = d.d_eq_poly();
            let mut at_most = Vec::new();
            let mut strict = Vec::new();
            for r in 0..k {
                for c in 0..k {
                    let mut without = poly.get(r, c).clone();
                    if delta.get(r, c).0 {
                        without = without.add(&HPoly::monomial(1));
                    }
                    for e in poly.get(r, c).exponents() {
                        let drop = actions2[c] - (actions2[r] - e as i64);
                        if drop > Rational64::from_integer(1) {
                            at_most.push(format!("h^{e} {} -> {} lowers the normalized action by {drop}", phi2_name(c), phi2_name(r)));
                        }
                    }
                    for e in without.exponents() {
                        let drop = actions2[c] - (actions2[r] - e as i64);
                        if drop >= Rational64::from_integer(1) {
                            strict.push(format!("h^{e} {} -> {} lowers the normalized action by {drop}", phi2_name(c), phi2_name(r)));
                        }
                    }
                }
            }
            rec.push("normalized_action_drop", at_most);
            rec.push("normalized_action_strict", strict);
        }
    }

    let horizon = relation_horizon(d);
    let mut drel = Vec::new();
    for i in 1..=2 * d.d_eq_max().max(1) {
        for s in SIGNS {
            drel.extend(entries(&d_relation_residual(d, i, s), |r, c| format!("level {i}{s}: entry {} <- {}", phi2_name(r), phi2_name(c))));
        }
    }
    rec.push("d_eq_relations", drel);
    let deq = d.d_eq_poly();
    let sq = deq.mul(&deq);
    rec.push("d_eq_squared", sq.nonzero_entries().map(|(r, c, p)| format!("d_eq²({}) has {} {}", phi2_name(c), p, phi2_name(r))).collect());

    rec.push(
        "pants_zero_minus",
        entries(&d.pants_level(0, Sign::Minus), |r, c| format!("p^{{0,-}}({}) has a {} term", pair_name(d, c), phi2_name(r))),
    );
    let mut pdeg = Vec::new();
    let mut pact = Vec::new();
    for (&(i, s), mat) in &d.pants {
        for (r, c, _) in mat.nonzero_entries() {
            let (a, b) = (c / m, c % m);
            let label = format!("p^{{{i},{s}}}: {} -> {}", pair_name(d, c), phi2_name(r));
            if parity(d.phi2[r].degree + i as i64) != parity(d.phi[a].degree + d.phi[b].degree) {
                pdeg.push(format!("{label} does not preserve degree mod 2"));
            }
            if d.mode == Mode::Exact {
                let diff = actions2[r] - d.phi[a].action - d.phi[b].action;
                let diagonal = a == b && emb[a] == r;
                if diff < Rational64::from_integer(0) || (diff == Rational64::from_integer(0) && !diagonal) {
                    pact.push(format!(
                        "{label} does not {} the action",
                        if diff < Rational64::from_integer(0) { "preserve" } else { "strictly increase" }
                    ));
                }
            }
        }
    }
    rec.push("pants_degree", pdeg);
    if d.mode == Mode::Exact {
        rec.push("pants_action", pact);
    }
    let mut prel = Vec::new();
    for i in 0..=horizon {
        for s in SIGNS {
            prel.extend(entries(&pants_relation_residual(d, i, s), |r, c| {
                format!("level {i}{s}: coefficient of {} in the image of {}", phi2_name(r), pair_name(d, c))
            }));
        }
    }
    rec.push("pants_relations", prel);
    let p = d.pants_poly();
    let lhs = deq.mul(&p).add(&p.mul(&borel_tensor_differential(d)));
    rec.push(
        "pants_chain_map",
        lhs.nonzero_entries().map(|(r, c, q)| format!("defect {q} at {} -> {}", pair_name(d, c), phi2_name(r))).collect(),
    );

    if d.phi.iter().any(|x| x.krein.is_some() || x.detsign.is_some()) {
        let mut adm = Vec::new();
        let mut diag = Vec::new();
        for (x, pt) in d.phi.iter().enumerate() {
            if let Some(s) = pt.detsign {
                if s != if parity(pt.degree) == 0 { 1 } else { -1 } {
                    adm.push(format!("detsign of {} disagrees with its degree {}", pt.name, pt.degree));
                }
            }
            let Some(kappa) = pt.krein else { continue };
            let sign = pt.detsign.unwrap_or(if parity(pt.degree) == 0 { 1 } else { -1 });
            if !is_admissible(sign, kappa, d.n) {
                adm.push(format!("({sign}, {kappa}) is not an admissible (sign, Krein index) pair for n = {}", d.n));
                continue;
            }
            let want = HPoly::monomial((d.n as i64 - kappa) as usize);
            let got = p.get(emb[x], d.pair(x, x));
            if *got != want {
                diag.push(format!(
                    "p({0}⊗{0}) has {0}-coefficient {1}, expected {want}",
                    pt.name,
                    if got.is_zero() { "0".into() } else { got.to_string() }
                ));
            }
        }
        rec.push("krein_admissible", adm);
        rec.push("krein_diagonal", diag);
    }
    ValidationReport { checks: rec.checks }
}
