//! Block normal forms for `Sp**`, the component invariant `(sign det(I - A), κ)`
//! and standard representatives of each component.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::krein::krein_index;
use super::matrix::{direct_sum, SympMatrix, Tolerances};
use super::path::PathExpr;
use crate::error::{Error, ParseError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    IPlus,
    IMinus,
    IiPlus,
    IiMinus,
    Iii,
}

impl BlockKind {
    pub const ALL: [BlockKind; 5] = [BlockKind::IPlus, BlockKind::IMinus, BlockKind::IiPlus, BlockKind::IiMinus, BlockKind::Iii];

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::IPlus => "i+",
            BlockKind::IMinus => "i-",
            BlockKind::IiPlus => "ii+",
            BlockKind::IiMinus => "ii-",
            BlockKind::Iii => "iii",
        }
    }

    pub fn planes(self) -> usize {
        if self == BlockKind::Iii {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BlockSpec {
    IPlus { a: f64 },
    IMinus { a: f64 },
    IiPlus { a1: f64, a2: f64 },
    IiMinus { a1: f64, a2: f64 },
    Iii { a1: f64, a2: f64 },
}

impl BlockSpec {
    pub fn kind(&self) -> BlockKind {
        match self {
            BlockSpec::IPlus { .. } => BlockKind::IPlus,
            BlockSpec::IMinus { .. } => BlockKind::IMinus,
            BlockSpec::IiPlus { .. } => BlockKind::IiPlus,
            BlockSpec::IiMinus { .. } => BlockKind::IiMinus,
            BlockSpec::Iii { .. } => BlockKind::Iii,
        }
    }

    pub fn rotation(kind: BlockKind, theta: f64) -> BlockSpec {
        let snap = |x: f64| if (x - x.round()).abs() < 4.0 * f64::EPSILON { x.round() } else { x };
        let (s, c) = theta.sin_cos();
        let (s, c) = (snap(s), snap(c));
        match kind {
            BlockKind::IiMinus => BlockSpec::IiMinus { a1: c, a2: s },
            _ => BlockSpec::IiPlus { a1: c, a2: s },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Range(msg));
        match *self {
            BlockSpec::IPlus { a } if !(a > 0.0 && a < 1.0) => bad(format!("i+ needs a in (0,1), got {a}")),
            BlockSpec::IMinus { a } if !(a > -1.0 && a < 0.0) => bad(format!("i- needs a in (-1,0), got {a}")),
            BlockSpec::IiPlus { a1, a2 } | BlockSpec::IiMinus { a1, a2 } => {
                let sign_ok = if matches!(self, BlockSpec::IiPlus { .. }) { a2 > 0.0 } else { a2 < 0.0 };
                if (a1 * a1 + a2 * a2 - 1.0).abs() > 1e-12 {
                    bad(format!("{} needs a1^2 + a2^2 = 1, got {}", self.kind().name(), a1 * a1 + a2 * a2))
                } else if !sign_ok {
                    bad(format!("{} has the wrong sign of a2 = {a2}", self.kind().name()))
                } else {
                    Ok(())
                }
            }
            BlockSpec::Iii { a1, a2 } => {
                let r2 = a1 * a1 + a2 * a2;
                if !(a1 > -1.0 && a1 < 1.0) {
                    bad(format!("iii needs a1 in (-1,1), got {a1}"))
                } else if !(r2 > 0.0 && r2 <= 1.0 + 1e-12) {
                    bad(format!("iii needs a1^2 + a2^2 in (0,1], got {r2}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        match *self {
            BlockSpec::IPlus { a } | BlockSpec::IMinus { a } => DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, 1.0 / a]),
            BlockSpec::IiPlus { a1, a2 } | BlockSpec::IiMinus { a1, a2 } => DMatrix::from_row_slice(2, 2, &[a1, -a2, a2, a1]),
            BlockSpec::Iii { a1, a2 } => {
                let r2 = a1 * a1 + a2 * a2;
                #[rustfmt::skip]
                let m = DMatrix::from_row_slice(4, 4, &[
                    a1, 0.0, -a2, 0.0,
                    0.0, a1 / r2, 0.0, -a2 / r2,
                    a2, 0.0, a1, 0.0,
                    0.0, a2 / r2, 0.0, a1 / r2,
                ]);
                m
            }
        }
    }

    pub fn build(&self, tol: Tolerances) -> Result<SympMatrix> {
        self.validate()?;
        SympMatrix::new(self.matrix(), tol)
    }

    /// A lift of the block to the universal cover, as a path from the identity.
    pub fn default_lift(&self) -> PathExpr {
        match *self {
            BlockSpec::IPlus { a } => PathExpr::Exp { s: log_diag_form(a), t: 1.0 },
            BlockSpec::IMinus { a } => {
                PathExpr::cat(PathExpr::Rot { n: 1, plane: 0, angle: std::f64::consts::PI }, PathExpr::Exp { s: log_diag_form(-a), t: 1.0 })
            }
            BlockSpec::IiPlus { a1, a2 } | BlockSpec::IiMinus { a1, a2 } => {
                PathExpr::Exp { s: DMatrix::identity(2, 2) * a2.atan2(a1), t: 1.0 }
            }
            BlockSpec::Iii { a1, a2 } => {
                let r2 = a1 * a1 + a2 * a2;
                let lr = 0.5 * r2.ln();
                let phi = a2.atan2(a1);
                // On p = (p1, p2) the block is r R(phi), on q = (q1, q2) it is R(phi) / r.
                let mut b = DMatrix::zeros(4, 4);
                for (off, l) in [(0, lr), (1, -lr)] {
                    b[(off, off)] = l;
                    b[(off + 2, off + 2)] = l;
                    b[(off, off + 2)] = -phi;
                    b[(off + 2, off)] = phi;
                }
                PathExpr::Exp { s: super::matrix::form_of(&b), t: 1.0 }
            }
        }
    }

    pub fn random<R: Rng>(rng: &mut R, kind: BlockKind) -> BlockSpec {
        match kind {
            BlockKind::IPlus => BlockSpec::IPlus { a: rng.random_range(0.05..0.95) },
            BlockKind::IMinus => BlockSpec::IMinus { a: rng.random_range(-0.95..-0.05) },
            BlockKind::IiPlus => BlockSpec::rotation(kind, rng.random_range(0.05..std::f64::consts::PI - 0.05)),
            BlockKind::IiMinus => BlockSpec::rotation(kind, -rng.random_range(0.05..std::f64::consts::PI - 0.05)),
            BlockKind::Iii => {
                let r: f64 = rng.random_range(0.2..0.95);
                let phi: f64 = rng.random_range(0.05..std::f64::consts::PI - 0.05) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                BlockSpec::Iii { a1: r * r * phi.cos(), a2: r * r * phi.sin() }
            }
        }
    }
}

/// `S` with `exp(J0^{-1} S) = diag(a, 1/a)` for `a > 0`.
fn log_diag_form(a: f64) -> DMatrix<f64> {
    let l = a.ln();
    DMatrix::from_row_slice(2, 2, &[0.0, -l, -l, 0.0])
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BlockSpec::IPlus { a } | BlockSpec::IMinus { a } => write!(f, "{}:a={a}", self.kind().name()),
            BlockSpec::IiPlus { a1, a2 } | BlockSpec::IiMinus { a1, a2 } | BlockSpec::Iii { a1, a2 } => {
                write!(f, "{}:a1={a1},a2={a2}", self.kind().name())
            }
        }
    }
}

impl FromStr for BlockSpec {
    type Err = ParseError;

    /// `i+:a=0.5`, `ii-:a1=0,a2=-1`, `ii+:theta=1.2` or `iii:a1=0.3,a2=0.1`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (kind, params) = s.trim().split_once(':').ok_or_else(|| ParseError::new(format!("block `{s}` has no `kind:` prefix")))?;
        let kind = BlockKind::ALL
            .into_iter()
            .find(|k| k.name() == kind.trim())
            .ok_or_else(|| ParseError::new(format!("unknown block kind `{}`", kind.trim())))?;
        let mut a = None;
        let mut a1 = None;
        let mut a2 = None;
        let mut theta = None;
        for kv in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| ParseError::new(format!("expected key=value, got `{kv}`")))?;
            let v: f64 = v.trim().parse().map_err(|_| ParseError::new(format!("bad number `{}`", v.trim())))?;
            let slot = match k.trim() {
                "a" => &mut a,
                "a1" => &mut a1,
                "a2" => &mut a2,
                "theta" => &mut theta,
                other => return Err(ParseError::new(format!("unknown block parameter `{other}`"))),
            };
            *slot = Some(v);
        }
        let need = |x: Option<f64>, name: &str| x.ok_or_else(|| ParseError::new(format!("{} block needs `{name}`", kind.name())));
        Ok(match kind {
            BlockKind::IPlus => BlockSpec::IPlus { a: need(a, "a")? },
            BlockKind::IMinus => BlockSpec::IMinus { a: need(a, "a")? },
            BlockKind::IiPlus | BlockKind::IiMinus if theta.is_some() => BlockSpec::rotation(kind, theta.unwrap_or_default()),
            BlockKind::IiPlus => BlockSpec::IiPlus { a1: need(a1, "a1")?, a2: need(a2, "a2")? },
            BlockKind::IiMinus => BlockSpec::IiMinus { a1: need(a1, "a1")?, a2: need(a2, "a2")? },
            BlockKind::Iii => BlockSpec::Iii { a1: need(a1, "a1")?, a2: need(a2, "a2")? },
        })
    }
}

pub fn parse_blocks(s: &str) -> Result<Vec<BlockSpec>, ParseError> {
    s.split(';').map(str::trim).filter(|p| !p.is_empty()).map(str::parse).collect()
}

pub fn build_blocks(blocks: &[BlockSpec], tol: Tolerances) -> Result<SympMatrix> {
    if blocks.is_empty() {
        return Err(Error::Structure("empty block list".into()));
    }
    let parts = blocks.iter().map(|b| b.build(tol)).collect::<Result<Vec<_>>>()?;
    Ok(direct_sum(&parts))
}

pub fn lift_of_blocks(blocks: &[BlockSpec]) -> PathExpr {
    let mut parts: Vec<PathExpr> = blocks.iter().map(BlockSpec::default_lift).collect();
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        PathExpr::Sum(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentInvariant {
    /// Sign of `det(I - A)`.
    pub sign: i8,
    pub kappa: i64,
}

pub fn component_invariant(a: &SympMatrix) -> Result<ComponentInvariant> {
    let kappa = krein_index(a)?.kappa;
    Ok(ComponentInvariant { sign: if a.det_i_minus() > 0.0 { 1 } else { -1 }, kappa })
}

pub fn is_admissible(sign: i8, k: i64, n: usize) -> bool {
    match sign {
        1 => k.unsigned_abs() as usize <= n,
        -1 => n >= 1 && (k.unsigned_abs() as usize) < n,
        _ => false,
    }
}

/// Blocks of the standard representative: `|k|` rotations of the sign of `k`,
/// one `i+` block when `sign = -1`, and `i-` blocks for the rest.
pub fn representative_blocks(sign: i8, k: i64, n: usize) -> Result<Vec<BlockSpec>> {
    if n == 0 || !is_admissible(sign, k, n) {
        return Err(Error::Range(format!("(s, k) = ({sign}, {k}) is not realized in Sp**(R^{})", 2 * n)));
    }
    let kind = if k > 0 { BlockKind::IiPlus } else { BlockKind::IiMinus };
    let mut blocks: Vec<BlockSpec> =
        (0..k.unsigned_abs()).map(|_| BlockSpec::rotation(kind, k.signum() as f64 * std::f64::consts::FRAC_PI_2)).collect();
    if sign == -1 {
        blocks.push(BlockSpec::IPlus { a: 0.5 });
    }
    while blocks.len() < n {
        blocks.push(BlockSpec::IMinus { a: -0.5 });
    }
    Ok(blocks)
}

pub fn representative_for(sign: i8, k: i64, n: usize) -> Result<SympMatrix> {
    build_blocks(&representative_blocks(sign, k, n)?, Tolerances::default())
}

/// Random block list filling exactly `n` planes.
pub fn random_blocks<R: Rng>(rng: &mut R, n: usize) -> Vec<BlockSpec> {
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let kinds: Vec<BlockKind> = BlockKind::ALL.into_iter().filter(|k| k.planes() <= left).collect();
        let kind = kinds[rng.random_range(0..kinds.len())];
        left -= kind.planes();
        out.push(BlockSpec::random(rng, kind));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_examples() {
        let r = BlockSpec::IiPlus { a1: 0.0, a2: 1.0 }.build(Tolerances::default()).unwrap();
        assert!((r.det_i_minus() - 2.0).abs() < 1e-12);
        let i = BlockSpec::IPlus { a: 0.5 }.build(Tolerances::default()).unwrap();
        assert!(i.det_i_minus() < 0.0);
        let iii = BlockSpec::Iii { a1: 0.4, a2: 0.0 }.build(Tolerances::default()).unwrap();
        let two = direct_sum(&[
            BlockSpec::IPlus { a: 0.4 }.build(Tolerances::default()).unwrap(),
            BlockSpec::IPlus { a: 0.4 }.build(Tolerances::default()).unwrap(),
        ]);
        // Same matrix up to reordering (p1, q1, p2, q2): both are diagonal with entries a, 1/a.
        for k in 0..4 {
            assert!((iii.m[(k, k)] - two.m[(k, k)]).abs() < 1e-12);
        }
        assert!(BlockSpec::IPlus { a: 1.5 }.validate().is_err());
        assert!(BlockSpec::IiPlus { a1: 0.0, a2: -1.0 }.validate().is_err());
    }

    #[test]
    fn n_one_components() {
        let table = [((-1, 0), "i+:a=0.5"), ((1, 0), "i-:a=-0.5"), ((1, 1), "ii+:theta=1"), ((1, -1), "ii-:theta=-1")];
        for ((s, k), spec) in table {
            let a = build_blocks(&parse_blocks(spec).unwrap(), Tolerances::default()).unwrap();
            assert_eq!(component_invariant(&a).unwrap(), ComponentInvariant { sign: s, kappa: k });
        }
    }

    #[test]
    fn representatives_round_trip() {
        for n in 1..=3 {
            for s in [1i8, -1] {
                for k in -(n as i64) - 1..=n as i64 + 1 {
                    match representative_for(s, k, n) {
                        Ok(a) => assert_eq!(component_invariant(&a).unwrap(), ComponentInvariant { sign: s, kappa: k }),
                        Err(_) => assert!(!is_admissible(s, k, n)),
                    }
                }
            }
        }
        assert!(representative_for(-1, 2, 2).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let b: BlockSpec = "iii:a1=0.3,a2=-0.2".parse().unwrap();
        assert_eq!(b.to_string().parse::<BlockSpec>().unwrap(), b);
        assert!("iv:a=1".parse::<BlockSpec>().is_err());
    }
}
