//! Smith normal forms over GF(2)[h] and over its localization at (h).
//!
//! Both reductions log every elementary operation. Replaying the log on the
//! input reproduces the diagonal form exactly, which is how the tests check
//! them.

use super::linalg::{poly_mod_h, poly_to_rational, Mat, Ring};
use super::poly::HPoly;
use super::rational::HRational;

#[derive(Clone, Debug, PartialEq)]
pub enum SmithOp<R> {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    /// `row[dst] += factor * row[src]`
    AddRow {
        src: usize,
        dst: usize,
        factor: R,
    },
    /// `col[dst] += factor * col[src]`
    AddCol {
        src: usize,
        dst: usize,
        factor: R,
    },
    ScaleRow {
        row: usize,
        factor: R,
    },
    ScaleCol {
        col: usize,
        factor: R,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certificate<R> {
    pub ops: Vec<SmithOp<R>>,
}

impl<R: Ring> Certificate<R> {
    pub fn replay(&self, m: &Mat<R>) -> Mat<R> {
        let mut m = m.clone();
        for op in &self.ops {
            apply(&mut m, op);
        }
        m
    }
}

fn apply<R: Ring>(m: &mut Mat<R>, op: &SmithOp<R>) {
    match op {
        SmithOp::SwapRows(a, b) => m.swap_rows(*a, *b),
        SmithOp::SwapCols(a, b) => m.swap_cols(*a, *b),
        SmithOp::AddRow { src, dst, factor } => m.add_row_multiple(*src, *dst, factor),
        SmithOp::AddCol { src, dst, factor } => m.add_col_multiple(*src, *dst, factor),
        SmithOp::ScaleRow { row, factor } => m.scale_row(*row, factor),
        SmithOp::ScaleCol { col, factor } => m.scale_col(*col, factor),
    }
}

struct Recorder<R> {
    m: Mat<R>,
    ops: Vec<SmithOp<R>>,
}

impl<R: Ring> Recorder<R> {
    fn run(&mut self, op: SmithOp<R>) {
        let trivial = match &op {
            SmithOp::SwapRows(a, b) | SmithOp::SwapCols(a, b) => a == b,
            SmithOp::AddRow { factor, .. } | SmithOp::AddCol { factor, .. } => factor.is_zero(),
            SmithOp::ScaleRow { factor, .. } | SmithOp::ScaleCol { factor, .. } => factor.is_one(),
        };
        if !trivial {
            apply(&mut self.m, &op);
            self.ops.push(op);
        }
    }
}

/// Smith form over the principal ideal domain GF(2)[h].
#[derive(Clone, Debug)]
pub struct PidSmith {
    pub rank: usize,
    /// Nonzero diagonal entries in order; each divides the next. Unit
    /// factors (the polynomial 1) are included.
    pub invariant_factors: Vec<HPoly>,
    pub diagonal: Mat<HPoly>,
    pub certificate: Certificate<HPoly>,
}

impl PidSmith {
    /// Invariant factors that are not units, i.e. the cyclic torsion
    /// summands of the cokernel.
    pub fn nonunit_factors(&self) -> Vec<HPoly> {
        self.invariant_factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

pub fn smith_pid(input: &Mat<HPoly>) -> PidSmith {
    let mut rec = Recorder { m: input.clone(), ops: Vec::new() };
    let (rows, cols) = input.shape();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut found = true;
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if let Some(d) = rec.m.get(r, c).degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((r, c, d));
                        }
                    }
                }
            }
            let Some((pr, pc, _)) = best else {
                found = false;
                break;
            };
            rec.run(SmithOp::SwapRows(t, pr));
            rec.run(SmithOp::SwapCols(t, pc));
            let pivot = rec.m.get(t, t).clone();
            for r in t + 1..rows {
                let (q, _) = rec.m.get(r, t).divmod(&pivot).expect("nonzero pivot");
                rec.run(SmithOp::AddRow { src: t, dst: r, factor: q });
            }
            for c in t + 1..cols {
                let (q, _) = rec.m.get(t, c).divmod(&pivot).expect("nonzero pivot");
                rec.run(SmithOp::AddCol { src: t, dst: c, factor: q });
            }
            let leftover = (t + 1..rows).any(|r| !rec.m.get(r, t).is_zero()) || (t + 1..cols).any(|c| !rec.m.get(t, c).is_zero());
            if leftover {
                continue;
            }
            let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| !pivot.divides(rec.m.get(r, c)));
            match bad {
                Some((r, _)) => rec.run(SmithOp::AddRow { src: r, dst: t, factor: HPoly::one() }),
                None => break,
            }
        }
        if !found {
            break;
        }
        t += 1;
    }
    let invariant_factors: Vec<HPoly> = (0..t).map(|i| rec.m.get(i, i).clone()).collect();
    PidSmith { rank: t, invariant_factors, diagonal: rec.m, certificate: Certificate { ops: rec.ops } }
}

/// Smith form over the local ring GF(2)[h]_(h), where every polynomial with
/// constant term 1 is a unit.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub rank: usize,
    /// Exponents `a_k` of the diagonal entries `h^{a_k}`, ascending.
    pub exponents: Vec<usize>,
    pub diagonal: Mat<HRational>,
    pub certificate: Certificate<HRational>,
}

impl LocalSmith {
    pub fn torsion_exponents(&self) -> Vec<usize> {
        self.exponents.iter().copied().filter(|&a| a > 0).collect()
    }

    pub fn units(&self) -> usize {
        self.exponents.iter().filter(|&&a| a == 0).count()
    }
}

/// Pivots on an entry of minimal h-adic valuation, breaking ties by the
/// lowest (row, column), and scales it to exactly `h^v`.
pub fn smith_local(input: &Mat<HPoly>) -> LocalSmith {
    let mut rec = Recorder { m: poly_to_rational(input), ops: Vec::new() };
    let (rows, cols) = input.shape();
    let mut exponents = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, i64)> = None;
        for r in t..rows {
            for c in t..cols {
                if let Some(v) = rec.m.get(r, c).valuation() {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((r, c, v));
                    }
                }
            }
        }
        let Some((pr, pc, v)) = best else {
            break;
        };
        let v = usize::try_from(v).expect("entries of the local ring have nonnegative valuation");
        rec.run(SmithOp::SwapRows(t, pr));
        rec.run(SmithOp::SwapCols(t, pc));
        let hv = HRational::from_poly(HPoly::monomial(v));
        let unit = hv.div(rec.m.get(t, t)).expect("nonzero pivot");
        rec.run(SmithOp::ScaleRow { row: t, factor: unit });
        for r in t + 1..rows {
            let f = rec.m.get(r, t).div(&hv).expect("nonzero pivot");
            rec.run(SmithOp::AddRow { src: t, dst: r, factor: f });
        }
        for c in t + 1..cols {
            let f = rec.m.get(t, c).div(&hv).expect("nonzero pivot");
            rec.run(SmithOp::AddCol { src: t, dst: c, factor: f });
        }
        exponents.push(v);
    }
    LocalSmith { rank: exponents.len(), exponents, diagonal: rec.m, certificate: Certificate { ops: rec.ops } }
}

/// Cross-checks of a local Smith form against ranks computed directly:
/// the number of unit exponents is the rank mod h, and the number of
/// exponents is the rank over GF(2)(h).
pub fn local_smith_agrees(input: &Mat<HPoly>, s: &LocalSmith) -> bool {
    s.units() == poly_mod_h(input).rank() && s.rank == poly_to_rational(input).rank()
}
