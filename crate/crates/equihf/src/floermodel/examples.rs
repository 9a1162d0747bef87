use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use rand_chacha::ChaCha8Rng;

use super::datum::{FixedPoint, FloerDatum, Mode, PeriodicPoint};
use super::solver::{solve_pants, PantsTarget};
use crate::error::{Error, ParseError, Result};
use crate::morseflow::Sign;
use crate::scalars::{Gf2, HPoly, Mat};
use crate::symplinalg::is_admissible;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    MorsePair {
        i: usize,
        n: usize,
    },
    TwistedPair {
        i: usize,
        n: usize,
    },
    Annulus,
    Clifford,
    /// One fixed point of degree 0 with no differentials.
    Point {
        n: usize,
        kappa: i64,
    },
}

impl Builtin {
    pub const NAMES: [&'static str; 5] = ["morse_pair", "twisted_pair", "annulus", "clifford", "point"];

    /// Every built-in datum used by the test suites: all Morse and twisted
    /// pairs with `n ≤ 3`, the annulus, the Clifford torus and two points.
    pub fn catalogue() -> Vec<Builtin> {
        let mut out = Vec::new();
        for n in 1..=3 {
            out.extend((1..=2 * n).map(|i| Builtin::MorsePair { i, n }));
        }
        for n in 2..=3 {
            out.extend((2..2 * n).map(|i| Builtin::TwistedPair { i, n }));
        }
        out.extend([Builtin::Annulus, Builtin::Clifford, Builtin::Point { n: 1, kappa: 0 }, Builtin::Point { n: 2, kappa: 1 }]);
        out
    }

    pub fn build(self) -> Result<FloerDatum> {
        match self {
            Builtin::MorsePair { i, n } => morse_pair(i, n),
            Builtin::TwistedPair { i, n } => twisted_pair(i, n),
            Builtin::Annulus => Ok(annulus()),
            Builtin::Clifford => Ok(clifford()),
            Builtin::Point { n, kappa } => single_point(n, kappa),
        }
    }

    /// Look up a name with the optional `i`, `n` and `kappa` parameters.
    pub fn from_parts(name: &str, i: Option<usize>, n: Option<usize>, kappa: Option<i64>) -> Result<Builtin> {
        let need = |v: Option<usize>, what: &str| v.ok_or_else(|| Error::Range(format!("{name} needs --{what}")));
        match name {
            "morse_pair" => Ok(Builtin::MorsePair { i: need(i, "i")?, n: need(n, "n")? }),
            "twisted_pair" => Ok(Builtin::TwistedPair { i: need(i, "i")?, n: need(n, "n")? }),
            "annulus" => Ok(Builtin::Annulus),
            "clifford" => Ok(Builtin::Clifford),
            "point" => Ok(Builtin::Point { n: n.unwrap_or(1), kappa: kappa.unwrap_or(0) }),
            _ => Err(Error::Range(format!("unknown example '{name}'; known: {}", Builtin::NAMES.join(", ")))),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::MorsePair { i, n } => write!(f, "morse_pair({i},{n})"),
            Builtin::TwistedPair { i, n } => write!(f, "twisted_pair({i},{n})"),
            Builtin::Annulus => write!(f, "annulus"),
            Builtin::Clifford => write!(f, "clifford"),
            Builtin::Point { n, kappa } => write!(f, "point({n},{kappa})"),
        }
    }
}

/// Accepts `annulus`, `clifford`, `morse_pair(i,n)`, `twisted_pair(i,n)` and `point(n,kappa)`.
impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| ParseError::new(format!("missing ')' in '{s}'")))?;
                (name.to_string(), inner.split(',').map(str::to_string).collect::<Vec<_>>())
            }
            None => (s.clone(), vec![]),
        };
        let num = |k: usize| -> Result<i64> {
            args.get(k)
                .ok_or_else(|| ParseError::new(format!("'{s}' needs {} arguments", k + 1)))?
                .parse::<i64>()
                .map_err(|_| ParseError::new(format!("bad argument in '{s}'")).into())
        };
        let unsigned =
            |k: usize| -> Result<usize> { usize::try_from(num(k)?).map_err(|_| Error::Range(format!("negative argument in '{s}'"))) };
        match name.as_str() {
            "morse_pair" | "twisted_pair" if args.len() == 2 => Builtin::from_parts(&name, Some(unsigned(0)?), Some(unsigned(1)?), None),
            "point" if args.len() == 2 => Ok(Builtin::Point { n: unsigned(0)?, kappa: num(1)? }),
            "annulus" | "clifford" if args.is_empty() => Builtin::from_parts(&name, None, None, None),
            _ => Err(ParseError::new(format!("unknown example '{s}'")).into()),
        }
    }
}

fn q(num: i64, den: i64) -> Rational64 {
    Rational64::new(num, den)
}

fn sign_of_degree(d: i64) -> i8 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn fixed(name: &str, degree: i64, action: Rational64, kappa: i64) -> FixedPoint {
    FixedPoint { name: name.into(), degree, action, krein: Some(kappa), detsign: Some(sign_of_degree(degree)) }
}

fn periodic(name: &str, degree: i64, action: Rational64) -> PeriodicPoint {
    PeriodicPoint { name: name.into(), degree, action }
}

fn bits(rows: usize, cols: usize, ones: &[(usize, usize)]) -> Mat<Gf2> {
    let mut m = Mat::zeros(rows, cols);
    for &(r, c) in ones {
        m.add_to(r, c, &Gf2::ONE);
    }
    m
}

/// Fill in `p^{i,±}` from their sums, the `h^i` coefficients of `total`.
fn with_pants(mut d: FloerDatum, total: &Mat<HPoly>) -> FloerDatum {
    let levels = (0..total.rows())
        .flat_map(|r| (0..total.cols()).map(move |c| (r, c)))
        .filter_map(|(r, c)| total.get(r, c).degree())
        .max()
        .unwrap_or(0);
    d.pants = solve_pants::<ChaCha8Rng>(&d, levels, PantsTarget::Totals(total), None).expect("built-in pants data solve the relations");
    d
}

fn zero_energy(d: &mut FloerDatum) {
    let k = d.k();
    d.set_d_level(1, Sign::Plus, Mat::identity(k));
    let rho = d.rho_matrix();
    d.set_d_level(1, Sign::Minus, rho);
}

/// The two critical points created in a birth-death, with `|x| = i - 1`,
/// `|y| = i` and `d x = y` for both `φ` and `φ²`.
fn pair(i: usize, n: usize, phi_shift: i64, phi2_shift: i64) -> FloerDatum {
    let (i, ni) = (i as i64, n as i64);
    let phi = vec![fixed("x", i - 1 + phi_shift, q(0, 1), ni - i + 1), fixed("y", i + phi_shift, q(1, 10), ni - i)];
    let phi2 = vec![periodic("x", i - 1 + phi2_shift, q(0, 1)), periodic("y", i + phi2_shift, q(1, 5))];
    let mut d = FloerDatum {
        mode: Mode::Exact,
        n,
        epsilon: q(1, 20),
        phi,
        phi2,
        rho: vec![0, 1],
        d_phi: bits(2, 2, &[(1, 0)]),
        d_phi2: bits(2, 2, &[(1, 0)]),
        d_eq: BTreeMap::new(),
        pants: BTreeMap::new(),
    };
    zero_energy(&mut d);
    let iu = i as usize;
    let mut total = Mat::<HPoly>::zeros(2, 4);
    total.set(0, d.pair(0, 0), HPoly::monomial(iu - 1));
    total.set(1, d.pair(0, 1), HPoly::monomial(iu - 1));
    total.set(1, d.pair(1, 1), HPoly::monomial(iu));
    with_pants(d, &total)
}

pub fn morse_pair(i: usize, n: usize) -> Result<FloerDatum> {
    if n == 0 || i == 0 || i > 2 * n {
        return Err(Error::Range(format!("morse_pair needs 1 <= i <= 2n, got i = {i}, n = {n}")));
    }
    Ok(pair(i, n, 0, 0))
}

/// The same pair after composing with the rotation by `π` in one plane,
/// which lowers the degrees by one for `φ` and by two for `φ²`.
pub fn twisted_pair(i: usize, n: usize) -> Result<FloerDatum> {
    if n < 2 || i < 2 || i > 2 * n - 1 {
        return Err(Error::Range(format!("twisted_pair needs 2 <= i <= 2n - 1, got i = {i}, n = {n}")));
    }
    Ok(pair(i, n, -1, -2))
}

/// Two fixed points of `φ` and four of `φ²`, two of which are exchanged.
pub fn annulus() -> FloerDatum {
    let phi = vec![fixed("x", 0, q(0, 1), 0), fixed("y", 1, q(1, 1), 0)];
    let phi2 = vec![periodic("x", -1, q(0, 1)), periodic("z0", 0, q(1, 10)), periodic("z1", 0, q(1, 10)), periodic("y", 1, q(2, 1))];
    let mut d = FloerDatum {
        mode: Mode::Exact,
        n: 1,
        epsilon: q(1, 20),
        phi,
        phi2,
        rho: vec![0, 2, 1, 3],
        d_phi: bits(2, 2, &[(1, 0)]),
        d_phi2: bits(4, 4, &[(1, 0), (2, 0), (3, 1), (3, 2)]),
        d_eq: BTreeMap::new(),
        pants: BTreeMap::new(),
    };
    zero_energy(&mut d);
    let mut total = Mat::<HPoly>::zeros(4, 4);
    total.set(0, d.pair(0, 0), HPoly::monomial(1));
    total.set(1, d.pair(0, 0), HPoly::one());
    total.set(3, d.pair(0, 1), HPoly::one());
    total.set(3, d.pair(1, 1), HPoly::monomial(1));
    with_pants(d, &total)
}

/// The four intersection points of the real plane and the Clifford torus,
/// exchanged in pairs by `z ↦ -z`.
pub fn clifford() -> FloerDatum {
    let zero = q(0, 1);
    let phi2 = vec![periodic("x--", 0, zero), periodic("x++", 0, zero), periodic("x-+", 1, zero), periodic("x+-", 1, zero)];
    let mut d = FloerDatum {
        mode: Mode::Monotone,
        n: 1,
        epsilon: zero,
        phi: vec![],
        phi2,
        rho: vec![1, 0, 3, 2],
        d_phi: Mat::zeros(0, 0),
        d_phi2: bits(4, 4, &[(2, 0), (3, 0), (2, 1), (3, 1), (0, 2), (1, 2), (0, 3), (1, 3)]),
        d_eq: BTreeMap::new(),
        pants: BTreeMap::new(),
    };
    zero_energy(&mut d);
    d
}

/// A single nondegenerate fixed point `x` with `p(x ⊗ x) = h^{n-κ} x`.
pub fn single_point(n: usize, kappa: i64) -> Result<FloerDatum> {
    if n == 0 || !is_admissible(1, kappa, n) {
        return Err(Error::Range(format!("a degree 0 point needs |kappa| <= n, got kappa = {kappa}, n = {n}")));
    }
    let e = (n as i64 - kappa) as usize;
    let mut d = FloerDatum {
        mode: Mode::Exact,
        n,
        epsilon: q(1, 1),
        phi: vec![fixed("x", 0, q(0, 1), kappa)],
        phi2: vec![periodic("x", -(e as i64), q(0, 1))],
        rho: vec![0],
        d_phi: Mat::zeros(1, 1),
        d_phi2: Mat::zeros(1, 1),
        d_eq: BTreeMap::new(),
        pants: BTreeMap::new(),
    };
    zero_energy(&mut d);
    let mut total = Mat::<HPoly>::zeros(1, 1);
    total.set(0, 0, HPoly::monomial(e));
    Ok(with_pants(d, &total))
}

/// Remove the diagonal coefficient `x ⊗ x -> x` at every level.
pub fn zero_diagonal(d: &FloerDatum, x: usize) -> FloerDatum {
    let mut out = d.clone();
    let (row, col) = (d.embedding()[x], d.pair(x, x));
    for (key, mut mat) in std::mem::take(&mut out.pants) {
        mat.set(row, col, Gf2::ZERO);
        out.set_pants_level(key.0, key.1, mat);
    }
    out
}
