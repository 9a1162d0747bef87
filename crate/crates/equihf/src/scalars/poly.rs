use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// A polynomial in `h` with coefficients in GF(2).
///
/// Bit `k` of the packed words is the coefficient of `h^k`. The word vector
/// never ends in a zero word, so the zero polynomial is the empty vector and
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPoly {
    words: Vec<u64>,
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly { words: Vec::new() }
    }

    pub fn one() -> Self {
        HPoly { words: vec![1] }
    }

    /// `h^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = HPoly::zero();
        p.set_coeff(k, true);
        p
    }

    pub fn from_bit(b: bool) -> Self {
        if b {
            HPoly::one()
        } else {
            HPoly::zero()
        }
    }

    /// Build from a list of exponents; repeated exponents cancel.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = HPoly::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    /// Build from coefficients listed by ascending power.
    pub fn from_coeffs(bits: &[bool]) -> Self {
        let mut p = HPoly::zero();
        for (k, &b) in bits.iter().enumerate() {
            if b {
                p.flip(k);
            }
        }
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    pub fn set_coeff(&mut self, k: usize, value: bool) {
        if self.coeff(k) != value {
            self.flip(k);
        }
    }

    fn flip(&mut self, k: usize) {
        let w = k / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (k % 64);
        self.normalize();
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    /// Lowest power with a nonzero coefficient, `None` (infinite) for zero.
    pub fn h_valuation(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Constant term; a polynomial is a unit of the local ring at (h) iff this is set.
    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(i * 64 + t);
                w &= w - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &HPoly) -> HPoly {
        let (long, short) = if self.words.len() >= other.words.len() { (self, other) } else { (other, self) };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        let mut p = HPoly { words };
        p.normalize();
        p
    }

    pub fn shl(&self, k: usize) -> HPoly {
        if self.is_zero() {
            return HPoly::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut p = HPoly { words };
        p.normalize();
        p
    }

    /// Divide by `h^k`, dropping the low coefficients.
    pub fn shr(&self, k: usize) -> HPoly {
        let exps: Vec<usize> = self.exponents().into_iter().filter(|&e| e >= k).map(|e| e - k).collect();
        HPoly::from_exponents(&exps)
    }

    /// Keep only the coefficients of `h^0 .. h^(n-1)`.
    pub fn truncate(&self, n: usize) -> HPoly {
        let exps: Vec<usize> = self.exponents().into_iter().filter(|&e| e < n).collect();
        HPoly::from_exponents(&exps)
    }

    pub fn mul(&self, other: &HPoly) -> HPoly {
        if self.is_zero() || other.is_zero() {
            return HPoly::zero();
        }
        let mut acc = vec![0u64; self.words.len() + other.words.len() + 1];
        for k in self.exponents() {
            let (ws, bs) = (k / 64, k % 64);
            for (i, &w) in other.words.iter().enumerate() {
                acc[i + ws] ^= w << bs;
                if bs != 0 {
                    acc[i + ws + 1] ^= w >> (64 - bs);
                }
            }
        }
        let mut p = HPoly { words: acc };
        p.normalize();
        p
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    pub fn divmod(&self, divisor: &HPoly) -> Result<(HPoly, HPoly), DivisionByZero> {
        let dd = divisor.degree().ok_or(DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = HPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.flip(shift);
            rem = rem.add(&divisor.shl(shift));
        }
        Ok((quot, rem))
    }

    pub fn divides(&self, other: &HPoly) -> bool {
        match other.divmod(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &HPoly) -> HPoly {
        let (q, r) = self.divmod(divisor).expect("division by the zero polynomial");
        assert!(r.is_zero(), "{self} is not divisible by {divisor}");
        q
    }

    /// Monic greatest common divisor (every nonzero polynomial over GF(2) is monic).
    pub fn gcd(&self, other: &HPoly) -> HPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    pub fn pow(&self, e: u32) -> HPoly {
        let mut out = HPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Value at h = 0 as a bit, i.e. reduction mod h.
    pub fn mod_h(&self) -> bool {
        self.constant_term()
    }
}

/// Returned by [`HPoly::divmod`] when the divisor is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("division by the zero polynomial")]
pub struct DivisionByZero;

impl PartialOrd for HPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HPoly {
    /// Order by degree first, then by coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.len().cmp(&other.words.len()).then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "h".to_string(),
                _ => format!("h^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly({self})")
    }
}

impl FromStr for HPoly {
    type Err = ParseError;

    /// Accepts sums of `1`, `0`, `h`, `h^k` and `hk`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseError::new(format!("empty polynomial '{s}'")));
        }
        let mut p = HPoly::zero();
        for term in compact.split('+') {
            match term {
                "0" => {}
                "1" => p.flip(0),
                "h" => p.flip(1),
                t if t.starts_with('h') => {
                    let e = t[1..].trim_start_matches('^');
                    let k: usize = e.parse().map_err(|_| ParseError::new(format!("bad monomial '{t}' in polynomial '{s}'")))?;
                    p.flip(k);
                }
                t => return Err(ParseError::new(format!("bad monomial '{t}' in polynomial '{s}'"))),
            }
        }
        Ok(p)
    }
}
