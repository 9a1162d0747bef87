use serde::Serialize;

use super::involutive::{borel_complex, InvolutiveComplex};
use crate::complexes::{tensor_square_swap, Complex};
use crate::error::{Error, Result};
use crate::scalars::{poly_to_rational, FieldCohomology, Gf2, HPoly, HRational, Mat, Ring};

/// The swap square of `V` as an involutive complex.
pub fn swap_square(v: &Complex<Gf2>) -> InvolutiveComplex {
    let (sq, swap) = tensor_square_swap(v);
    InvolutiveComplex::new(sq, swap).expect("the factor swap is an involutive chain map")
}

fn tensor(a: &[Gf2], b: &[Gf2]) -> Vec<Gf2> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul(y));
        }
    }
    out
}

fn to_poly(v: &[Gf2]) -> Vec<HPoly> {
    v.iter().map(|b| HPoly::from_bit(b.0)).collect()
}

/// `c ⊗ c` as a cocycle of the Borel complex of the swap square.
pub fn squaring_map(v: &Complex<Gf2>, c: &[Gf2]) -> Result<Vec<HPoly>> {
    if c.len() != v.len() {
        return Err(Error::Structure(format!("vector of length {} for {} generators", c.len(), v.len())));
    }
    if !v.d.apply(c).iter().all(Ring::is_zero) {
        return Err(Error::Precondition("the input is not a cocycle".into()));
    }
    Ok(to_poly(&tensor(c, c)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellDefinedReport {
    /// `(c + dw)^{⊗2} - c^{⊗2}` is the Borel differential of
    /// `c⊗w + w⊗c + w⊗dw + h (w⊗w)`.
    pub explicit_formula: bool,
    /// The two squares have the same class after inverting `h`.
    pub same_tate_class: bool,
}

/// Checks that the square of `c + d w` differs from the square of `c` by a coboundary.
pub fn squaring_well_defined(v: &Complex<Gf2>, c: &[Gf2], w: &[Gf2]) -> Result<WellDefinedReport> {
    let a = squaring_map(v, c)?;
    let dw = v.d.apply(w);
    let shifted: Vec<Gf2> = c.iter().zip(&dw).map(|(x, y)| x.add(y)).collect();
    let b = squaring_map(v, &shifted)?;
    let diff: Vec<HPoly> = a.iter().zip(&b).map(|(x, y)| x.add(y)).collect();

    let mut witness = to_poly(&tensor(c, w));
    for (k, x) in tensor(w, c).iter().enumerate() {
        witness[k] = witness[k].add(&HPoly::from_bit(x.0));
    }
    for (k, x) in tensor(w, &dw).iter().enumerate() {
        witness[k] = witness[k].add(&HPoly::from_bit(x.0));
    }
    for (k, x) in tensor(w, w).iter().enumerate() {
        if x.0 {
            witness[k] = witness[k].add(&HPoly::monomial(1));
        }
    }
    let borel = borel_complex(&swap_square(v));
    let explicit_formula = borel.d.apply(&witness) == diff;
    let dr = poly_to_rational(&borel.d);
    let diff_r: Vec<HRational> = diff.into_iter().map(HRational::from_poly).collect();
    let same_tate_class = dr.solve(&diff_r).is_some();
    Ok(WellDefinedReport { explicit_formula, same_tate_class })
}

/// `h · (Sq(v1 + v2) - Sq(v1) - Sq(v2)) = d_C(v1 ⊗ v2)` for cocycles `v1, v2`.
pub fn squaring_additivity_holds(v: &Complex<Gf2>, v1: &[Gf2], v2: &[Gf2]) -> Result<bool> {
    let sum: Vec<Gf2> = v1.iter().zip(v2).map(|(a, b)| a.add(b)).collect();
    let (s, a, b) = (squaring_map(v, &sum)?, squaring_map(v, v1)?, squaring_map(v, v2)?);
    let h = HPoly::monomial(1);
    let lhs: Vec<HPoly> = (0..s.len()).map(|k| s[k].add(&a[k]).add(&b[k]).mul(&h)).collect();
    let borel = borel_complex(&swap_square(v));
    Ok(borel.d.apply(&to_poly(&tensor(v1, v2))) == lhs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KaledinReport {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub bijective: bool,
    /// Columns are Tate coordinates of the squares of a basis of `H(V)`.
    pub matrix: Vec<Vec<String>>,
}

/// The map `H(V) ⊗ GF(2)(h) -> Tate cohomology of V ⊗ V`, sending a basis
/// class `[c]` to `[c ⊗ c]` and extended linearly.
pub fn kaledin_check(v: &Complex<Gf2>) -> KaledinReport {
    let hv = FieldCohomology::of(&v.d);
    let sq = swap_square(v);
    let tate = FieldCohomology::of(&poly_to_rational(&borel_complex(&sq).d));
    let cols: Vec<Vec<HRational>> = hv
        .reps()
        .iter()
        .map(|c| {
            let s: Vec<HRational> = tensor(c, c).iter().map(|b| HRational::from_poly(HPoly::from_bit(b.0))).collect();
            tate.coords(&s).expect("squares of cocycles are Borel cocycles")
        })
        .collect();
    let m = Mat::from_cols(tate.dim(), &cols);
    let rank = m.rank();
    KaledinReport {
        source_dim: hv.dim(),
        target_dim: tate.dim(),
        rank,
        bijective: hv.dim() == tate.dim() && rank == hv.dim(),
        matrix: (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect(),
    }
}
