//! Random involutive complexes assembled from small equivariant cells and
//! then mixed by a random change of basis.

use rand::Rng;

use super::involutive::InvolutiveComplex;
use crate::complexes::{Complex, Generator, Grading};
use crate::scalars::{Gf2, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    /// One generator fixed by the involution.
    Point,
    /// Two generators exchanged by the involution.
    FreePair,
    /// `x -> y`, both fixed.
    AcyclicPoint,
    /// `x1 -> y1`, `x2 -> y2`, with `x1 <-> x2` and `y1 <-> y2`.
    AcyclicFreePair,
    /// A fixed `x` with `d x = y1 + y2` onto a free pair.
    Norm,
    /// A free pair `b1, b2` with `d b1 = d b2 = c` onto a fixed `c`.
    Augmentation,
}

impl Cell {
    pub fn size(self) -> usize {
        match self {
            Cell::Point => 1,
            Cell::FreePair | Cell::AcyclicPoint => 2,
            Cell::Norm | Cell::Augmentation => 3,
            Cell::AcyclicFreePair => 4,
        }
    }

    pub fn is_acyclic(self) -> bool {
        matches!(self, Cell::AcyclicPoint | Cell::AcyclicFreePair)
    }

    pub fn is_levelwise_free(self) -> bool {
        matches!(self, Cell::FreePair | Cell::AcyclicFreePair)
    }

    const ALL: [Cell; 6] = [Cell::Point, Cell::FreePair, Cell::AcyclicPoint, Cell::AcyclicFreePair, Cell::Norm, Cell::Augmentation];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Any,
    Acyclic,
    LevelwiseFree,
}

#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub max_dim: usize,
    pub family: Family,
    /// Conjugate by a general invertible matrix, so the involution is no
    /// longer a permutation.
    pub general_involution: bool,
}

/// A direct sum of cells before mixing, kept so tests can build sub- and
/// quotient complexes.
#[derive(Clone, Debug)]
pub struct CellSum {
    pub cells: Vec<(Cell, i64)>,
    pub complex: InvolutiveComplex,
}

pub fn cell_sum(cells: &[(Cell, i64)]) -> CellSum {
    let n: usize = cells.iter().map(|(c, _)| c.size()).sum();
    let mut gens = Vec::with_capacity(n);
    let mut d = Mat::zeros(n, n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut at = 0;
    for (k, &(cell, deg)) in cells.iter().enumerate() {
        let mut gen = |name: &str, dg: i64| gens.push(Generator::new(format!("{name}{k}"), dg));
        match cell {
            Cell::Point => gen("p", deg),
            Cell::FreePair => {
                gen("f", deg);
                gen("g", deg);
                perm[at] = at + 1;
                perm[at + 1] = at;
            }
            Cell::AcyclicPoint => {
                gen("x", deg);
                gen("y", deg + 1);
                d.set(at + 1, at, Gf2::ONE);
            }
            Cell::AcyclicFreePair => {
                gen("x", deg);
                gen("x'", deg);
                gen("y", deg + 1);
                gen("y'", deg + 1);
                d.set(at + 2, at, Gf2::ONE);
                d.set(at + 3, at + 1, Gf2::ONE);
                perm.splice(at..at + 4, [at + 1, at, at + 3, at + 2]);
            }
            Cell::Norm => {
                gen("n", deg);
                gen("m", deg + 1);
                gen("m'", deg + 1);
                d.set(at + 1, at, Gf2::ONE);
                d.set(at + 2, at, Gf2::ONE);
                perm[at + 1] = at + 2;
                perm[at + 2] = at + 1;
            }
            Cell::Augmentation => {
                gen("b", deg);
                gen("b'", deg);
                gen("c", deg + 1);
                d.set(at + 2, at, Gf2::ONE);
                d.set(at + 2, at + 1, Gf2::ONE);
                perm[at] = at + 1;
                perm[at + 1] = at;
            }
        }
        at += cell.size();
    }
    let c = Complex::new(gens, Grading::Z, d).expect("square differential");
    CellSum { cells: cells.to_vec(), complex: InvolutiveComplex::from_permutation(c, &perm).expect("cells are involutive") }
}

pub fn random_cells<R: Rng>(rng: &mut R, spec: &RandomSpec) -> Vec<(Cell, i64)> {
    let allowed: Vec<Cell> = Cell::ALL
        .into_iter()
        .filter(|c| match spec.family {
            Family::Any => true,
            Family::Acyclic => c.is_acyclic(),
            Family::LevelwiseFree => c.is_levelwise_free(),
        })
        .collect();
    let mut cells = Vec::new();
    let mut size = 0;
    let target = rng.random_range(1..=spec.max_dim);
    loop {
        let fitting: Vec<Cell> = allowed.iter().copied().filter(|c| size + c.size() <= target).collect();
        if fitting.is_empty() {
            break;
        }
        let cell = fitting[rng.random_range(0..fitting.len())];
        size += cell.size();
        cells.push((cell, rng.random_range(-2..=2)));
    }
    cells
}

fn random_invertible<R: Rng>(rng: &mut R, degrees: &[i64], equivariant_with: Option<&Mat<Gf2>>) -> (Mat<Gf2>, Mat<Gf2>) {
    let n = degrees.len();
    loop {
        let m = Mat::from_fn(n, n, |r, c| Gf2(degrees[r] == degrees[c] && rng.random_bool(0.4)));
        let p = match equivariant_with {
            Some(iota) => Mat::identity(n).add(&m).add(&iota.mul(&m).mul(iota)),
            None => Mat::identity(n).add(&m),
        };
        if let Some(inv) = p.inverse() {
            return (p, inv);
        }
    }
}

/// Conjugate by a random degree-preserving change of basis `P`; returns
/// the mixed complex together with `P`.
pub fn mix<R: Rng>(rng: &mut R, w: &InvolutiveComplex, general_involution: bool) -> (InvolutiveComplex, Mat<Gf2>) {
    let degrees: Vec<i64> = w.complex.gens.iter().map(|g| g.degree).collect();
    let (p, pinv) = random_invertible(rng, &degrees, if general_involution { None } else { Some(&w.iota) });
    let d = p.mul(&w.complex.d).mul(&pinv);
    let iota = p.mul(&w.iota).mul(&pinv);
    let c = Complex::new(w.complex.gens.clone(), w.complex.grading, d).expect("same shape");
    (InvolutiveComplex::new(c, iota).expect("conjugation preserves the structure"), p)
}

pub fn random_involutive<R: Rng>(rng: &mut R, spec: &RandomSpec) -> InvolutiveComplex {
    let cells = random_cells(rng, spec);
    mix(rng, &cell_sum(&cells).complex, spec.general_involution).0
}

/// A random complex over GF(2) with `d^2 = 0`: a mixed sum of points and arrows.
pub fn random_complex<R: Rng>(rng: &mut R, max_dim: usize) -> Complex<Gf2> {
    let spec = RandomSpec { max_dim, family: Family::Any, general_involution: true };
    let cells: Vec<(Cell, i64)> =
        random_cells(rng, &spec).into_iter().map(|(c, d)| (if c.is_acyclic() { Cell::AcyclicPoint } else { Cell::Point }, d)).collect();
    mix(rng, &cell_sum(&cells).complex, true).0.complex
}
