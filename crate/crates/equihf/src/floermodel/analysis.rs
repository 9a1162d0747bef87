//! Invariants of a validated datum: equivariant and polynomial Floer
//! cohomology, localization of the pants map, Smith-type inequalities and
//! the two spectral sequences that compare them with `HF(φ²)`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use super::datum::{FloerDatum, Mode};
use super::validate::borel_tensor_differential;
use crate::complexes::{module_cohomology, quasi_iso_check, spectral_sequence, ChainMap, Complex, Filtration, Generator, Grading};
use crate::equivariant::{group_cohomology, module_invariants, EqModuleInvariants, InvolutiveComplex};
use crate::error::{Error, Result};
use crate::morseflow::Sign;
use crate::scalars::{poly_to_rational, smith_pid, FieldCohomology, Gf2, HPoly, HRational, Mat};

fn plain_gens(names: impl Iterator<Item = String>) -> Vec<Generator> {
    names.map(|n| Generator::new(n, 0)).collect()
}

/// `CF(φ²)[h]` with the differential `d_eq`, ungraded.
pub fn equivariant_complex(d: &FloerDatum) -> Result<Complex<HPoly>> {
    let dm = d.d_eq_poly();
    if !dm.mul(&dm).is_zero() {
        return Err(Error::Precondition("d_eq does not square to zero".into()));
    }
    Ok(Complex { gens: plain_gens(d.phi2.iter().map(|p| p.name.clone())), grading: Grading::None, d: dm })
}

/// `CF(φ)^{⊗2}[h]` with `d ⊗ 1 + 1 ⊗ d + h(1 + swap)`, ungraded.
pub fn borel_tensor_complex(d: &FloerDatum) -> Complex<HPoly> {
    let names = d.phi.iter().flat_map(|a| d.phi.iter().map(move |b| format!("{}*{}", a.name, b.name)));
    Complex { gens: plain_gens(names), grading: Grading::None, d: borel_tensor_differential(d) }
}

/// `HF_eq` over `GF(2)[[h]]`.
pub fn hf_eq_invariants(d: &FloerDatum) -> Result<EqModuleInvariants> {
    Ok(module_invariants(&equivariant_complex(d)?.d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyInvariants {
    pub free_rank: usize,
    /// Non-unit invariant factors over `GF(2)[h]`.
    pub invariant_factors: Vec<String>,
    pub torsion_dim: usize,
    /// `dim_GF(2)` of the module, when it is finite.
    pub gf2_dim: Option<usize>,
    /// The `h`-adic valuations of the factors are the exponents of `HF_eq`.
    pub agrees_with_hf_eq: bool,
}

/// `HF_eq^poly` over `GF(2)[h]`, compared with its completion `HF_eq`.
pub fn hf_poly_invariants(d: &FloerDatum) -> Result<PolyInvariants> {
    let c = equivariant_complex(d)?;
    let eq = module_invariants(&c.d);
    let h = module_cohomology(&c.d);
    let mut vals: Vec<usize> = smith_pid(&c.d).nonunit_factors().iter().filter_map(|f| f.h_valuation()).filter(|&v| v > 0).collect();
    vals.sort_unstable();
    let mut local = eq.torsion_exponents.clone();
    local.sort_unstable();
    Ok(PolyInvariants {
        agrees_with_hf_eq: h.free_rank == eq.free_rank && vals == local,
        free_rank: h.free_rank,
        gf2_dim: (h.free_rank == 0).then_some(h.torsion_dim),
        invariant_factors: h.torsion_factors,
        torsion_dim: h.torsion_dim,
    })
}

/// The first slot where `p` fails to be a chain map, as `(level, target, a ⊗ b)`.
fn chain_map_defect(d: &FloerDatum, src: &Mat<HPoly>, tgt: &Mat<HPoly>, p: &Mat<HPoly>) -> Option<(usize, String, String)> {
    let defect = p.mul(src).add(&tgt.mul(p));
    let mut first: Option<(usize, usize, usize)> = None;
    for (r, c, q) in defect.nonzero_entries() {
        let v = q.h_valuation().unwrap_or(0);
        if first.is_none_or(|f| v < f.0) {
            first = Some((v, r, c));
        }
    }
    let m = d.m();
    first.map(|(v, r, c)| (v, d.phi2[r].name.clone(), format!("{}*{}", d.phi[c / m].name, d.phi[c % m].name)))
}

/// The pants product as a map of `GF(2)[h]` complexes.
pub fn pants_chain_map(d: &FloerDatum) -> Result<ChainMap<HPoly>> {
    let source = borel_tensor_complex(d);
    let target = equivariant_complex(d)?;
    let p = d.pants_poly();
    if let Some((i, y, ab)) = chain_map_defect(d, &source.d, &target.d, &p) {
        return Err(Error::Precondition(format!("pants map is not a chain map: level {i}, output {y}, input {ab}")));
    }
    ChainMap::new(source, target, p, 0)
}

fn rational_complex(c: &Complex<HPoly>) -> Complex<HRational> {
    Complex { gens: c.gens.clone(), grading: Grading::None, d: poly_to_rational(&c.d) }
}

fn rational_bijection(source: &Complex<HPoly>, target: &Complex<HPoly>, f: &Mat<HPoly>) -> Option<(usize, usize, usize, bool)> {
    if !f.mul(&source.d).add(&target.d.mul(f)).is_zero() {
        return None;
    }
    let map = ChainMap::new(rational_complex(source), rational_complex(target), poly_to_rational(f), 0).ok()?;
    let r = quasi_iso_check(&map);
    Some((r.source_dim, r.target_dim, r.induced_rank, r.bijective))
}

/// Keep only the entries of `m` (rows `rows`, columns `cols` actions) that preserve action.
fn action_preserving(m: &Mat<HPoly>, rows: &[Rational64], cols: &[Rational64]) -> Mat<HPoly> {
    Mat::from_fn(m.rows(), m.cols(), |r, c| if rows[r] == cols[c] { m.get(r, c).clone() } else { HPoly::zero() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizedReport {
    pub chain_map: bool,
    /// First failing slot `(level, output, input)` when `chain_map` is false.
    pub defect: Option<(usize, String, String)>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub induced_rank: Option<usize>,
    pub bijective: bool,
    pub hf_phi_dim: usize,
    pub dims_match: bool,
    /// The action-preserving part of `p` is the diagonal map `x ⊗ x -> h^{n-κ(x)} x`.
    pub e0_diagonal: Option<bool>,
    /// The action-preserving part of `p` is an isomorphism over `GF(2)(h)`.
    pub e0_bijective: bool,
    pub passes: bool,
}

/// Whether `p` becomes a quasi-isomorphism after inverting `h`.
pub fn localized_check(d: &FloerDatum) -> Result<LocalizedReport> {
    let source = borel_tensor_complex(d);
    let target = equivariant_complex(d)?;
    let p = d.pants_poly();
    let defect = chain_map_defect(d, &source.d, &target.d, &p);
    let full = rational_bijection(&source, &target, &p);

    let phi_actions: Vec<Rational64> = d.phi.iter().map(|x| x.action).collect();
    let pair_actions: Vec<Rational64> = phi_actions.iter().flat_map(|&a| phi_actions.iter().map(move |&b| a + b)).collect();
    let phi2_actions = d.phi2_actions();
    let e0_src = Complex { d: action_preserving(&source.d, &pair_actions, &pair_actions), ..source.clone() };
    let e0_tgt = Complex { d: action_preserving(&target.d, &phi2_actions, &phi2_actions), ..target.clone() };
    let e0_p = action_preserving(&p, &phi2_actions, &pair_actions);
    let e0_bijective = rational_bijection(&e0_src, &e0_tgt, &e0_p).is_some_and(|r| r.3);
    let e0_diagonal = d.has_krein_data().then(|| {
        let emb = d.embedding();
        let mut expected = Mat::<HPoly>::zeros(d.k(), d.m() * d.m());
        for (x, fp) in d.phi.iter().enumerate() {
            let e = d.n as i64 - fp.krein.unwrap_or(0);
            if e >= 0 {
                expected.set(emb[x], d.pair(x, x), HPoly::monomial(e as usize));
            }
        }
        e0_p == expected
    });

    let hf_phi_dim = FieldCohomology::of(&d.d_phi).dim();
    let (source_dim, target_dim, induced_rank, bijective) = match full {
        Some((s, t, r, b)) => (s, t, Some(r), b),
        None => {
            let dim = |c: &Complex<HPoly>| {
                let q = poly_to_rational(&c.d);
                q.rows() - 2 * q.rank()
            };
            (dim(&source), dim(&target), None, false)
        }
    };
    let dims_match = source_dim == hf_phi_dim && target_dim == hf_phi_dim;
    Ok(LocalizedReport {
        chain_map: defect.is_none(),
        passes: defect.is_none() && bijective && dims_match,
        defect,
        source_dim,
        target_dim,
        induced_rank,
        bijective,
        hf_phi_dim,
        dims_match,
        e0_diagonal,
        e0_bijective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithReport {
    pub hf_phi2_dim: usize,
    /// `dim H(CF(φ²))^ι` for the involution induced by `d^{1,-}`.
    pub invariant_dim: usize,
    pub generator_count: usize,
    pub free_rank: usize,
    pub localized_dim: usize,
    pub hf_phi_dim: usize,
    /// `dim HF(φ²)^ι ≥ dim HF_eq/h ≥ rank HF_eq` and the rank equals the localized dimension.
    pub chain_holds: bool,
    /// `dim HF(φ²)^ι ≥ dim HF(φ)`.
    pub quantum_holds: bool,
}

fn iota_on_cohomology(d: &FloerDatum) -> Result<(FieldCohomology<Gf2>, Mat<Gf2>)> {
    let iota = d.d_level(1, Sign::Minus);
    if iota.mul(&d.d_phi2) != d.d_phi2.mul(&iota) {
        return Err(Error::Precondition("d_eq^{1,-} is not a chain map of CF(phi^2)".into()));
    }
    let h = FieldCohomology::of(&d.d_phi2);
    let induced = h.induced(&iota, &h).expect("a chain map preserves cocycles");
    Ok((h, induced))
}

pub fn smith_check(d: &FloerDatum) -> Result<SmithReport> {
    let (h, iota) = iota_on_cohomology(d)?;
    let invariant_dim = iota.add(&Mat::identity(iota.rows())).kernel().len();
    let c = equivariant_complex(d)?;
    let eq = module_invariants(&c.d);
    let q = poly_to_rational(&c.d);
    let localized_dim = q.rows() - 2 * q.rank();
    let hf_phi_dim = FieldCohomology::of(&d.d_phi).dim();
    Ok(SmithReport {
        hf_phi2_dim: h.dim(),
        invariant_dim,
        generator_count: eq.generator_count,
        free_rank: eq.free_rank,
        localized_dim,
        hf_phi_dim,
        chain_holds: invariant_dim >= eq.generator_count && eq.generator_count >= eq.free_rank && eq.free_rank == localized_dim,
        quantum_holds: invariant_dim >= hf_phi_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub truncation: usize,
    /// `dim E_2` by power of `h` for `d_eq` reduced mod `h^N`.
    pub e2_levels: Vec<usize>,
    /// Expected from `H(Z/2; HF(φ²))`.
    pub e2_expected: Vec<usize>,
    pub h_adic_agrees: bool,
    /// Total `E_1` of the action filtration of `CF(φ²)((h))`, in exact mode.
    pub action_e1: Option<usize>,
    pub action_e1_expected: usize,
    pub action_agrees: bool,
}

/// `d_eq` mod `h^N` on generators `x h^j` (index `g N + j`), filtered by `j`.
fn truncated(d: &FloerDatum, n: usize) -> Complex<Gf2> {
    let k = d.k();
    let dm = d.d_eq_poly();
    let mut m = Mat::<Gf2>::zeros(k * n, k * n);
    for (r, c, p) in dm.nonzero_entries() {
        for e in p.exponents() {
            for j in 0..n.saturating_sub(e) {
                m.add_to(r * n + j + e, c * n + j, &Gf2::ONE);
            }
        }
    }
    let gens = (0..k).flat_map(|g| (0..n).map(move |j| (g, j))).map(|(g, j)| Generator::new(format!("{}h{j}", d.phi2[g].name), 0));
    Complex { gens: gens.collect(), grading: Grading::None, d: m }
}

pub fn spectral_checks(d: &FloerDatum) -> Result<SpectralReport> {
    let c = equivariant_complex(d)?;
    let n = 4.max(d.d_eq_max() + 3);

    let trunc = truncated(d, n);
    let weights = (0..d.k()).flat_map(|_| 0..n as i64).collect();
    let ss = spectral_sequence(&trunc, &Filtration::decreasing(weights))?;
    let by_level = ss.page(2).dims_by_level();
    let e2_levels: Vec<usize> = (0..n - 1).map(|j| by_level.get(&(j as i64)).copied().unwrap_or(0)).collect();

    let (h, iota) = iota_on_cohomology(d)?;
    let zero = Complex { gens: plain_gens((0..h.dim()).map(|i| format!("c{i}"))), grading: Grading::None, d: Mat::zeros(h.dim(), h.dim()) };
    // E2 is H(Z/2; H(CF(φ²))): the kernel of 1 + ι at h^0, the free part above.
    let (level0, middle) = match InvolutiveComplex::new(zero, iota) {
        Ok(w) => {
            let g = group_cohomology(&w);
            (g.generator_count, g.free_rank)
        }
        Err(_) => (usize::MAX, usize::MAX),
    };
    let e2_expected: Vec<usize> = std::iter::once(level0).chain((1..n - 1).map(|_| middle)).collect();

    let actions = d.phi2_actions();
    let mut ranks: BTreeMap<Rational64, i64> = actions.iter().map(|&a| (a, 0)).collect();
    for (i, v) in ranks.values_mut().enumerate() {
        *v = i as i64;
    }
    let action_e1 = if d.mode == Mode::Exact {
        let filtration = Filtration::decreasing(actions.iter().map(|a| ranks[a]).collect());
        Some(spectral_sequence(&rational_complex(&c), &filtration)?.page(1).total_dim())
    } else {
        None
    };
    let action_e1_expected = d.m();
    Ok(SpectralReport {
        truncation: n,
        h_adic_agrees: e2_levels == e2_expected,
        e2_levels,
        e2_expected,
        action_agrees: action_e1.is_none_or(|v| v == action_e1_expected),
        action_e1,
        action_e1_expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floermodel::{examples::Builtin, zero_diagonal};

    #[test]
    fn builtins_localize_and_satisfy_smith() {
        for b in Builtin::catalogue() {
            let d = b.build().unwrap();
            let l = localized_check(&d).unwrap();
            if d.m() > 0 {
                assert!(l.passes, "{b}: {l:?}");
                assert_eq!(l.e0_diagonal, Some(true), "{b}");
            }
            assert_eq!(l.bijective, l.e0_bijective, "{b}");
            let s = smith_check(&d).unwrap();
            assert!(s.chain_holds && s.quantum_holds, "{b}: {s:?}");
        }
    }

    #[test]
    fn builtins_have_consistent_spectral_sequences() {
        for b in Builtin::catalogue() {
            let d = b.build().unwrap();
            let s = spectral_checks(&d).unwrap();
            assert!(s.h_adic_agrees, "{b}: {s:?}");
            assert!(s.action_agrees, "{b}: {s:?}");
        }
    }

    #[test]
    fn annulus_invariants() {
        let d = crate::floermodel::annulus();
        let eq = hf_eq_invariants(&d).unwrap();
        assert_eq!(eq.free_rank, 0);
        let s = smith_check(&d).unwrap();
        assert_eq!(s.hf_phi_dim, 0);
        assert_eq!(s.localized_dim, 0);
    }

    #[test]
    fn broken_pants_is_reported_with_its_slot() {
        let d = zero_diagonal(&crate::floermodel::morse_pair(2, 1).unwrap(), 0);
        let err = pants_chain_map(&d).unwrap_err().to_string();
        assert!(err.contains("level"), "{err}");
    }
}
