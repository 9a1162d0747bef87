use std::fmt;

use serde::Serialize;

use super::strata::{Factor, Sign, Space, Stratum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FaceTerm {
    Zero,
    /// `p^{i,σ}`, with its two inputs exchanged when `swap` is set.
    Pants {
        i: usize,
        sign: Sign,
        swap: bool,
    },
    /// `d_eq^{a,τ} . p^{b,ρ}`.
    Compose {
        d_i: usize,
        d_sign: Sign,
        p_i: usize,
        p_sign: Sign,
    },
}

impl fmt::Display for FaceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FaceTerm::Zero => write!(f, "0"),
            FaceTerm::Pants { i, sign, swap } => {
                write!(f, "p^{{{i},{sign}}}")?;
                if swap {
                    write!(f, " . swap")?;
                }
                Ok(())
            }
            FaceTerm::Compose { d_i, d_sign, p_i, p_sign } => write!(f, "d_eq^{{{d_i},{d_sign}}} . p^{{{p_i},{p_sign}}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub stratum: Stratum,
    pub term: FaceTerm,
}

fn two(first_marked: bool, a: Factor, b: Factor) -> Stratum {
    Stratum { space: Space::P, factors: vec![a, b], marked: Some(if first_marked { 0 } else { 1 }) }
}

/// The `4i - 2` codimension one faces of `P̄^{i,σ}` with their contributions.
///
/// A face `P^{a,τ} x Q^{b,ρ}` contributes only when `b = 1`, as `p^{i-1,τ}`
/// with inputs exchanged when `ρ = -`; a face `Q^{a,ρ} x P^{b,τ}` always
/// contributes `d_eq^{a,ρ} . p^{b,τ}`.
pub fn codim1_faces(i: usize, sigma: Sign) -> Vec<Face> {
    let mut out = Vec::new();
    if i == 0 {
        return out;
    }
    for tau in [Sign::Plus, Sign::Minus] {
        let rho = tau.times(sigma);
        let start = usize::from(tau == Sign::Minus);
        for a in start..i {
            let term = if i - a == 1 { FaceTerm::Pants { i: a, sign: tau, swap: rho == Sign::Minus } } else { FaceTerm::Zero };
            out.push(Face { stratum: two(true, Factor { i: a, sign: tau }, Factor { i: i - a, sign: rho }), term });
        }
    }
    for tau in [Sign::Plus, Sign::Minus] {
        let rho = tau.times(sigma);
        let start = usize::from(tau == Sign::Minus);
        for b in (start..i).rev() {
            let term = FaceTerm::Compose { d_i: i - b, d_sign: rho, p_i: b, p_sign: tau };
            out.push(Face { stratum: two(false, Factor { i: i - b, sign: rho }, Factor { i: b, sign: tau }), term });
        }
    }
    out
}

/// The nonzero face terms in the order of the pants relation: the two
/// principal terms, then `d_eq^{a,+} . p + d_eq^{a,-} . p` for `a = 1, ..., i`.
pub fn relation_rhs(i: usize, sigma: Sign) -> Vec<FaceTerm> {
    let faces = codim1_faces(i, sigma);
    let mut principal: Vec<FaceTerm> = faces.iter().filter(|f| matches!(f.term, FaceTerm::Pants { .. })).map(|f| f.term).collect();
    principal.sort_by_key(|t| matches!(t, FaceTerm::Pants { swap: true, .. }));
    let mut composed: Vec<FaceTerm> = faces.iter().filter(|f| matches!(f.term, FaceTerm::Compose { .. })).map(|f| f.term).collect();
    composed.sort_by_key(|t| match *t {
        FaceTerm::Compose { d_i, d_sign, .. } => (d_i, d_sign),
        _ => unreachable!(),
    });
    principal.extend(composed);
    principal
}

pub fn relation_string(i: usize, sigma: Sign) -> String {
    let terms = relation_rhs(i, sigma);
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_relations() {
        assert_eq!(relation_string(1, Sign::Plus), "p^{0,+} + d_eq^{1,+} . p^{0,+}");
        assert_eq!(relation_string(1, Sign::Minus), "p^{0,+} . swap + d_eq^{1,-} . p^{0,+}");
        assert_eq!(
            relation_string(2, Sign::Plus),
            "p^{1,+} + p^{1,-} . swap + d_eq^{1,+} . p^{1,+} + d_eq^{1,-} . p^{1,-} + d_eq^{2,+} . p^{0,+}"
        );
    }

    #[test]
    fn face_counts_and_hidden_face() {
        for i in 1..=8 {
            for s in [Sign::Plus, Sign::Minus] {
                let faces = codim1_faces(i, s);
                assert_eq!(faces.len(), 4 * i - 2);
                assert!(faces.iter().all(|f| f.stratum.codim() == 1 && f.stratum.dim() + 1 == i));
            }
        }
        let f = codim1_faces(2, Sign::Plus);
        let hidden = f.iter().find(|f| f.stratum.to_string() == "P^{0,+} x Q^{2,+}").unwrap();
        assert_eq!(hidden.term, FaceTerm::Zero);
    }
}
