use std::fmt;
use std::str::FromStr;

use super::poly::{DivisionByZero, HPoly};
use crate::error::ParseError;

/// An element of GF(2)(h) in lowest terms.
///
/// Over GF(2) every nonzero polynomial is monic, so reducing by the gcd
/// already gives a unique representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HRational {
    num: HPoly,
    den: HPoly,
}

impl HRational {
    pub fn new(num: HPoly, den: HPoly) -> Result<Self, DivisionByZero> {
        if den.is_zero() {
            return Err(DivisionByZero);
        }
        if num.is_zero() {
            return Ok(HRational::zero());
        }
        let g = num.gcd(&den);
        Ok(HRational { num: num.div_exact(&g), den: den.div_exact(&g) })
    }

    pub fn zero() -> Self {
        HRational { num: HPoly::zero(), den: HPoly::one() }
    }

    pub fn one() -> Self {
        HRational { num: HPoly::one(), den: HPoly::one() }
    }

    pub fn from_poly(p: HPoly) -> Self {
        HRational { num: p, den: HPoly::one() }
    }

    pub fn num(&self) -> &HPoly {
        &self.num
    }

    pub fn den(&self) -> &HPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The h-adic valuation, which may be negative; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let v = self.num.h_valuation()? as i64;
        Some(v - self.den.h_valuation().expect("nonzero denominator") as i64)
    }

    /// True when the element lies in the local ring GF(2)[h] localized at (h).
    pub fn is_local(&self) -> bool {
        self.den.constant_term()
    }

    pub fn add(&self, other: &HRational) -> HRational {
        if self.den == other.den {
            return HRational::new(self.num.add(&other.num), self.den.clone()).expect("nonzero denominator");
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        HRational::new(num, self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn mul(&self, other: &HRational) -> HRational {
        if self.is_zero() || other.is_zero() {
            return HRational::zero();
        }
        HRational::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<HRational, DivisionByZero> {
        HRational::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &HRational) -> Result<HRational, DivisionByZero> {
        Ok(self.mul(&other.inv()?))
    }
}

impl From<HPoly> for HRational {
    fn from(p: HPoly) -> Self {
        HRational::from_poly(p)
    }
}

impl fmt::Display for HRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for HRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HRational({self})")
    }
}

impl FromStr for HRational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bare = |t: &str| {
            let t = t.trim();
            t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t).parse::<HPoly>()
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (bare(n)?, bare(d)?),
            None => (bare(s)?, HPoly::one()),
        };
        HRational::new(n, d).map_err(|_| ParseError::new(format!("zero denominator in '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> HRational {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_to_lowest_terms() {
        assert_eq!(r("1+h^2/1+h").to_string(), "1+h");
        assert_eq!(r("h/h^3").to_string(), "1/h^2");
        assert_eq!(r("h/h^3").valuation(), Some(-2));
        assert_eq!(r("(1+h^2)/(1+h)"), r("1+h"));
    }

    #[test]
    fn field_operations() {
        let a = r("1+h/h");
        let b = r("h/1+h^3");
        assert_eq!(a.mul(&a.inv().unwrap()), HRational::one());
        let s = a.add(&b);
        assert_eq!(s.add(&b), a);
        assert!(HRational::zero().inv().is_err());
        assert!("1/0".parse::<HRational>().is_err());
    }

    #[test]
    fn locality() {
        assert!(r("h/1+h").is_local());
        assert!(!r("1/h").is_local());
    }
}
