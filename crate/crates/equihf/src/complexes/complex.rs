use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::{smith_local, smith_pid, Field, FieldCohomology, Gf2, HPoly, HRational, Mat, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Grading {
    Z,
    Z2,
    None,
}

impl Grading {
    /// The bucket a degree falls into: itself, its parity, or a single class.
    pub fn class(self, degree: i64) -> i64 {
        match self {
            Grading::Z => degree,
            Grading::Z2 => degree.rem_euclid(2),
            Grading::None => 0,
        }
    }

    pub fn next_class(self, class: i64) -> i64 {
        self.class(class + 1)
    }

    pub fn prev_class(self, class: i64) -> i64 {
        self.class(class - 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Grading::Z => "z",
            Grading::Z2 => "z2",
            Grading::None => "none",
        }
    }
}

/// A scalar ring that knows how its elements shift degree.
///
/// `h` has degree 1, so a polynomial contributes each of its exponents.
/// Over the rational function field the grading is dropped.
pub trait Scalar: Ring {
    const RING_NAME: &'static str;
    fn degree_shifts(&self) -> Option<Vec<usize>>;
}

impl Scalar for Gf2 {
    const RING_NAME: &'static str = "gf2";
    fn degree_shifts(&self) -> Option<Vec<usize>> {
        Some(vec![0])
    }
}

impl Scalar for HPoly {
    const RING_NAME: &'static str = "gf2[h]";
    fn degree_shifts(&self) -> Option<Vec<usize>> {
        Some(self.exponents())
    }
}

impl Scalar for HRational {
    const RING_NAME: &'static str = "gf2(h)";
    fn degree_shifts(&self) -> Option<Vec<usize>> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub action: Option<Rational64>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator { name: name.into(), degree, action: None }
    }

    pub fn with_action(mut self, a: Rational64) -> Self {
        self.action = Some(a);
        self
    }
}

/// A finite complex of named generators. Column `j` of `d` is `d(gens[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R> {
    pub gens: Vec<Generator>,
    pub grading: Grading,
    pub d: Mat<R>,
}

impl<R: Scalar> Complex<R> {
    pub fn new(gens: Vec<Generator>, grading: Grading, d: Mat<R>) -> Result<Self> {
        let n = gens.len();
        if d.shape() != (n, n) {
            return Err(Error::Structure(format!("differential is {}x{} but there are {n} generators", d.rows(), d.cols())));
        }
        Ok(Complex { gens, grading, d })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    /// Same generators and grading, different scalars.
    pub fn map_scalars<S: Scalar>(&self, f: impl Fn(&R) -> S) -> Complex<S> {
        let grading = if S::RING_NAME == HRational::RING_NAME { Grading::None } else { self.grading };
        Complex { gens: self.gens.clone(), grading, d: self.d.map(f) }
    }

    pub fn check(&self, strict_action: bool) -> CheckReport {
        let d2 = self.d.mul(&self.d);
        let mut grading_violations = Vec::new();
        let mut action_violations = Vec::new();
        for (t, s, coeff) in self.d.nonzero_entries() {
            let (gt, gs) = (&self.gens[t], &self.gens[s]);
            if self.grading != Grading::None {
                if let Some(shifts) = coeff.degree_shifts() {
                    for k in shifts {
                        let expected = gs.degree + 1 - k as i64;
                        if self.grading.class(gt.degree) != self.grading.class(expected) {
                            grading_violations.push(EntryViolation::new(gt, gs, coeff, gt.degree + k as i64 - gs.degree));
                        }
                    }
                }
            }
            if t != s {
                if let (Some(at), Some(as_)) = (gt.action, gs.action) {
                    if at < as_ || (strict_action && at == as_) {
                        action_violations.push(EntryViolation::new(gt, gs, coeff, 0));
                    }
                }
            }
        }
        CheckReport {
            d_squared_zero: d2.is_zero(),
            d_squared_nonzero: d2.nonzero_entries().map(|(t, s, _)| (self.gens[t].name.clone(), self.gens[s].name.clone())).collect(),
            grading_violations,
            action_violations,
        }
    }

    /// Generator indices in each degree class, classes ascending.
    pub fn degree_classes(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            out.entry(self.grading.class(g.degree)).or_default().push(i);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryViolation {
    pub target: String,
    pub source: String,
    pub coefficient: String,
    /// Degree of the entry (`|target| + k - |source|` for a term `h^k`); 1 is correct.
    pub degree: i64,
}

impl EntryViolation {
    fn new<R: fmt::Display>(t: &Generator, s: &Generator, c: &R, degree: i64) -> Self {
        EntryViolation { target: t.name.clone(), source: s.name.clone(), coefficient: c.to_string(), degree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub d_squared_zero: bool,
    pub d_squared_nonzero: Vec<(String, String)>,
    pub grading_violations: Vec<EntryViolation>,
    pub action_violations: Vec<EntryViolation>,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared_zero && self.grading_violations.is_empty() && self.action_violations.is_empty()
    }
}

/// Cohomology dimensions of a complex over a field, per degree class.
///
/// The grading check is assumed to pass, so `d` maps each class into the next.
pub fn cohomology_by_degree<R: Field + Scalar>(c: &Complex<R>) -> BTreeMap<i64, usize> {
    let classes = c.degree_classes();
    let mut out = BTreeMap::new();
    if c.grading == Grading::None {
        out.insert(0, FieldCohomology::of(&c.d).dim());
        return out;
    }
    for (&k, idx) in &classes {
        let next = classes.get(&c.grading.next_class(k)).cloned().unwrap_or_default();
        let prev = classes.get(&c.grading.prev_class(k)).cloned().unwrap_or_default();
        let out_rank = if next.is_empty() { 0 } else { c.d.select(&next, idx).rank() };
        let in_rank = if prev.is_empty() { 0 } else { c.d.select(idx, &prev).rank() };
        out.insert(k, idx.len() - out_rank - in_rank);
    }
    out
}

pub fn total_cohomology<R: Field>(d: &Mat<R>) -> usize {
    d.rows() - 2 * d.rank()
}

/// `H` of a complex over GF(2)[h] as a module: free part plus cyclic torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleCohomology {
    pub free_rank: usize,
    /// Non-unit invariant factors over GF(2)[h].
    pub torsion_factors: Vec<String>,
    /// Torsion exponents after localizing at (h).
    pub local_torsion_exponents: Vec<usize>,
    /// Dimension over GF(2) of the torsion of the GF(2)[h]-module.
    pub torsion_dim: usize,
}

/// Since `d^2 = 0` over a PID, `ker d` is a direct summand and
/// `ker d / im d` is free of rank `n - 2 rank d` plus the torsion of coker d.
pub fn poly_cohomology(c: &Complex<HPoly>) -> ModuleCohomology {
    module_cohomology(&c.d)
}

pub fn module_cohomology(d: &Mat<HPoly>) -> ModuleCohomology {
    let pid = smith_pid(d);
    let local = smith_local(d);
    let torsion = pid.nonunit_factors();
    ModuleCohomology {
        free_rank: d.rows() - 2 * pid.rank,
        torsion_dim: torsion.iter().map(|f| f.degree().unwrap_or(0)).sum(),
        torsion_factors: torsion.iter().map(ToString::to_string).collect(),
        local_torsion_exponents: local.torsion_exponents(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<R> {
    pub source: Complex<R>,
    pub target: Complex<R>,
    pub f: Mat<R>,
    pub shift: i64,
}

impl<R: Scalar> ChainMap<R> {
    pub fn new(source: Complex<R>, target: Complex<R>, f: Mat<R>, shift: i64) -> Result<Self> {
        if f.shape() != (target.len(), source.len()) {
            return Err(Error::Structure(format!(
                "chain map is {}x{} but complexes have {} and {} generators",
                f.rows(),
                f.cols(),
                target.len(),
                source.len()
            )));
        }
        Ok(ChainMap { source, target, f, shift })
    }

    pub fn commutes(&self) -> bool {
        self.f.mul(&self.source.d) == self.target.d.mul(&self.f)
    }

    /// Mapping cone: generators of the source then the target, with
    /// differential `[[d_s, 0], [f, d_t]]`.
    pub fn cone(&self) -> Complex<R> {
        let (m, n) = (self.source.len(), self.target.len());
        let d = Mat::from_fn(m + n, m + n, |r, c| match (r < m, c < m) {
            (true, true) => self.source.d.get(r, c).clone(),
            (false, true) => self.f.get(r - m, c).clone(),
            (false, false) => self.target.d.get(r - m, c - m).clone(),
            (true, false) => R::zero(),
        });
        let mut gens: Vec<Generator> = self
            .source
            .gens
            .iter()
            .map(|g| Generator { name: format!("s:{}", g.name), degree: g.degree + 1 - self.shift, action: None })
            .collect();
        gens.extend(self.target.gens.iter().map(|g| Generator { name: format!("t:{}", g.name), degree: g.degree, action: None }));
        Complex { gens, grading: self.source.grading, d }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub source_dim: usize,
    pub target_dim: usize,
    pub induced_rank: usize,
    pub bijective: bool,
}

pub fn quasi_iso_check<R: Field + Scalar>(f: &ChainMap<R>) -> QuasiIsoReport {
    let hs = FieldCohomology::of(&f.source.d);
    let ht = FieldCohomology::of(&f.target.d);
    let induced = hs.induced(&f.f, &ht).expect("a chain map sends cocycles to cocycles");
    let induced_rank = induced.rank();
    QuasiIsoReport { source_dim: hs.dim(), target_dim: ht.dim(), induced_rank, bijective: hs.dim() == ht.dim() && induced_rank == hs.dim() }
}

/// Quasi-isomorphism over the local ring GF(2)[h]_(h): the cone is acyclic.
pub fn quasi_iso_local(f: &ChainMap<HPoly>) -> bool {
    let h = module_cohomology(&f.cone().d);
    h.free_rank == 0 && h.local_torsion_exponents.is_empty()
}

/// `V ⊗ V` with generators `a*b` (index `a * n + b`) and the factor swap.
pub fn tensor_square_swap(v: &Complex<Gf2>) -> (Complex<Gf2>, Mat<Gf2>) {
    let n = v.len();
    let mut gens = Vec::with_capacity(n * n);
    for a in &v.gens {
        for b in &v.gens {
            gens.push(Generator {
                name: format!("{}*{}", a.name, b.name),
                degree: a.degree + b.degree,
                action: a.action.zip(b.action).map(|(x, y)| x + y),
            });
        }
    }
    let mut d = Mat::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let src = a * n + b;
            for (t, _, _) in v.d.nonzero_entries().filter(|e| e.1 == a) {
                d.add_to(t * n + b, src, &Gf2::ONE);
            }
            for (t, _, _) in v.d.nonzero_entries().filter(|e| e.1 == b) {
                d.add_to(a * n + t, src, &Gf2::ONE);
            }
        }
    }
    let swap = Mat::from_fn(n * n, n * n, |r, c| Gf2(r == (c % n) * n + c / n));
    (Complex { gens, grading: v.grading, d }, swap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step(extra: bool) -> Complex<Gf2> {
        let mut d = Mat::zeros(2, 2);
        d.set(1, 0, Gf2::ONE);
        if extra {
            d.set(0, 1, Gf2::ONE);
        }
        Complex::new(vec![Generator::new("x", 0), Generator::new("y", 1)], Grading::Z, d).unwrap()
    }

    #[test]
    fn check_examples() {
        assert!(two_step(false).check(true).is_valid());
        let bad = two_step(true).check(false);
        assert_eq!(bad.grading_violations.len(), 1);
        assert_eq!(bad.grading_violations[0].degree, -1);
        assert!(!bad.d_squared_zero);
    }

    #[test]
    fn strict_action_check() {
        let mut c = two_step(false);
        c.gens[0].action = Some(Rational64::new(0, 1));
        c.gens[1].action = Some(Rational64::new(1, 10));
        assert!(c.check(true).is_valid());
        c.gens[1].action = Some(Rational64::new(0, 1));
        assert!(c.check(false).is_valid());
        assert!(!c.check(true).is_valid());
    }

    #[test]
    fn malformed_dimensions() {
        assert!(Complex::new(vec![Generator::new("x", 0)], Grading::Z, Mat::<Gf2>::zeros(2, 2)).is_err());
    }

    #[test]
    fn cohomology_examples() {
        assert!(cohomology_by_degree(&two_step(false)).values().all(|&d| d == 0));
        let gens = vec![Generator::new("a", 0), Generator::new("b", 0), Generator::new("c", 1), Generator::new("e", 3)];
        let c = Complex::new(gens, Grading::Z, Mat::<Gf2>::zeros(4, 4)).unwrap();
        let dims = cohomology_by_degree(&c);
        assert_eq!(dims, BTreeMap::from([(0, 2), (1, 1), (3, 1)]));
    }

    #[test]
    fn clifford_module() {
        let p = |s: &str| s.parse::<HPoly>().unwrap();
        let names = ["x--", "x-+", "x+-", "x++"];
        let degs = [0, 1, 1, 0];
        let gens = names.iter().zip(degs).map(|(n, d)| Generator::new(*n, d)).collect();
        let d = Mat::from_rows(vec![
            vec![p("h"), p("1"), p("1"), p("h")],
            vec![p("1"), p("h"), p("h"), p("1")],
            vec![p("1"), p("h"), p("h"), p("1")],
            vec![p("h"), p("1"), p("1"), p("h")],
        ]);
        let c = Complex::new(gens, Grading::Z2, d).unwrap();
        assert!(c.check(false).is_valid());
        let h = poly_cohomology(&c);
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion_factors, vec!["1+h^2".to_string()]);
        assert_eq!(h.torsion_dim, 2);
        assert!(h.local_torsion_exponents.is_empty());
    }

    #[test]
    fn tensor_square_examples() {
        let one = Complex::new(vec![Generator::new("v", 0)], Grading::Z, Mat::<Gf2>::zeros(1, 1)).unwrap();
        let (sq, swap) = tensor_square_swap(&one);
        assert_eq!(sq.len(), 1);
        assert_eq!(swap, Mat::identity(1));

        let two = Complex::new(vec![Generator::new("a", 0), Generator::new("b", 0)], Grading::Z, Mat::<Gf2>::zeros(2, 2)).unwrap();
        let (_, swap) = tensor_square_swap(&two);
        assert_eq!((0..4).filter(|&i| swap.get(i, i).0).count(), 2);

        let (sq, swap) = tensor_square_swap(&two_step(false));
        assert!(sq.check(false).is_valid());
        assert_eq!(swap.mul(&sq.d), sq.d.mul(&swap));
        assert_eq!(swap.mul(&swap), Mat::identity(4));
        assert_eq!(total_cohomology(&sq.d), 0);
    }

    #[test]
    fn quasi_iso_examples() {
        let c = two_step(false);
        let id = ChainMap::new(c.clone(), c.clone(), Mat::identity(2), 0).unwrap();
        assert!(id.commutes() && quasi_iso_check(&id).bijective);
        let zero = Complex::new(vec![], Grading::Z, Mat::<Gf2>::zeros(0, 0)).unwrap();
        let to_zero = ChainMap::new(c, zero, Mat::zeros(0, 2), 0).unwrap();
        assert!(quasi_iso_check(&to_zero).bijective);

        let sub = Complex::new(vec![Generator::new("x", 0)], Grading::Z, Mat::<Gf2>::zeros(1, 1)).unwrap();
        let big = Complex::new(vec![Generator::new("x", 0), Generator::new("y", 1)], Grading::Z, Mat::zeros(2, 2)).unwrap();
        let incl = ChainMap::new(sub, big, Mat::from_rows(vec![vec![Gf2::ONE], vec![Gf2::ZERO]]), 0).unwrap();
        let r = quasi_iso_check(&incl);
        assert!(!r.bijective);
        assert_eq!((r.source_dim, r.target_dim), (1, 2));
    }
}
