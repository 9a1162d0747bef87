use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self.times(Sign::Minus)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(ParseError::new(format!("expected a sign `+` or `-`, got `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Space {
    Q,
    P,
}

impl FromStr for Space {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.trim() {
            "Q" | "q" => Ok(Space::Q),
            "P" | "p" => Ok(Space::P),
            other => Err(ParseError::new(format!("expected space `Q` or `P`, got `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub i: usize,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Stratum {
    pub space: Space,
    pub factors: Vec<Factor>,
    /// Position of the parametrized factor in `P̄` strata.
    pub marked: Option<usize>,
}

impl Stratum {
    pub fn codim(&self) -> usize {
        self.factors.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().enumerate().map(|(j, f)| if Some(j) == self.marked { f.i } else { f.i - 1 }).sum()
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, fac) in self.factors.iter().enumerate() {
            if j > 0 {
                write!(f, " x ")?;
            }
            let name = if Some(j) == self.marked { 'P' } else { 'Q' };
            write!(f, "{name}^{{{},{}}}", fac.i, fac.sign)?;
        }
        Ok(())
    }
}

fn compositions(i: usize) -> Vec<Vec<usize>> {
    if i == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=i {
        for mut rest in compositions(i - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn sign_vectors(len: usize, product: Sign) -> Vec<Vec<Sign>> {
    (0u64..1 << len)
        .map(|bits| (0..len).map(|k| if bits >> (len - 1 - k) & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect::<Vec<_>>())
        .filter(|v| v.iter().fold(Sign::Plus, |a, &b| a.times(b)) == product)
        .collect()
}

/// All strata of `Q̄^{i,σ}` or `P̄^{i,σ}`, optionally only those of a given codimension.
pub fn enumerate_strata(space: Space, i: usize, sigma: Sign, codim: Option<usize>) -> Result<Vec<Stratum>> {
    if space == Space::Q && i == 0 {
        return Err(Error::Range("Q^{0,σ} is not defined; unparametrized trajectories need i >= 1".into()));
    }
    if i > 24 {
        return Err(Error::Range(format!("i = {i} is too large to enumerate")));
    }
    let keep = |len: usize| codim.is_none_or(|c| len == c + 1);
    let mut out = Vec::new();
    match space {
        Space::Q => {
            for comp in compositions(i).into_iter().filter(|c| keep(c.len())) {
                for signs in sign_vectors(comp.len(), sigma) {
                    let factors = comp.iter().zip(&signs).map(|(&i, &sign)| Factor { i, sign }).collect();
                    out.push(Stratum { space, factors, marked: None });
                }
            }
        }
        Space::P => {
            for m in 0..=i {
                for comp in compositions(i - m).into_iter().filter(|c| keep(c.len() + 1)) {
                    for pos in 0..=comp.len() {
                        let mut lens = comp.clone();
                        lens.insert(pos, m);
                        for signs in sign_vectors(lens.len(), sigma) {
                            if m == 0 && signs[pos] == Sign::Minus {
                                continue;
                            }
                            let factors = lens.iter().zip(&signs).map(|(&i, &sign)| Factor { i, sign }).collect();
                            out.push(Stratum { space, factors, marked: Some(pos) });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `2^{i-1}(i+1)`, the number of corners of `P̄^{i,σ}`.
pub fn corner_count(i: usize) -> u64 {
    if i == 0 {
        1
    } else {
        (1u64 << (i - 1)) * (i as u64 + 1)
    }
}

/// Label of a corner stratum: its signs, with `⊕` at the marked factor.
pub fn corner_label(s: &Stratum) -> Option<String> {
    if s.space != Space::P || s.dim() != 0 {
        return None;
    }
    Some(s.factors.iter().enumerate().map(|(j, f)| if Some(j) == s.marked { '⊕' } else { f.sign.symbol() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_two_minus() {
        let s = enumerate_strata(Space::Q, 2, Sign::Minus, Some(1)).unwrap();
        let names: Vec<String> = s.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["Q^{1,+} x Q^{1,-}", "Q^{1,-} x Q^{1,+}"]);
        assert!(enumerate_strata(Space::Q, 0, Sign::Plus, None).is_err());
    }

    #[test]
    fn hexagon() {
        let s = enumerate_strata(Space::P, 2, Sign::Plus, Some(2)).unwrap();
        let mut labels: Vec<String> = s.iter().filter_map(corner_label).collect();
        labels.sort();
        let mut expected = vec!["⊕++", "+⊕+", "++⊕", "-⊕-", "--⊕", "⊕--"];
        expected.sort();
        assert_eq!(labels, expected);
        assert_eq!(enumerate_strata(Space::P, 0, Sign::Plus, None).unwrap().len(), 1);
        assert!(enumerate_strata(Space::P, 0, Sign::Minus, None).unwrap().is_empty());
    }

    #[test]
    fn corners_match_enumeration() {
        for i in 1..=6 {
            for sigma in [Sign::Plus, Sign::Minus] {
                let n = enumerate_strata(Space::P, i, sigma, Some(i)).unwrap().len() as u64;
                assert_eq!(n, corner_count(i));
            }
        }
    }
}
