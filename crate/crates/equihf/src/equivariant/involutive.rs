use serde::Serialize;

use crate::complexes::{module_cohomology, Complex, Generator};
use crate::error::{Error, Result};
use crate::scalars::{lift_gf2, poly_to_rational, FieldCohomology, Gf2, HPoly, HRational, Mat, Ring};

/// A complex over GF(2) with a chain-level involution of degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutiveComplex {
    pub complex: Complex<Gf2>,
    pub iota: Mat<Gf2>,
}

impl InvolutiveComplex {
    pub fn new(complex: Complex<Gf2>, iota: Mat<Gf2>) -> Result<Self> {
        let n = complex.len();
        if iota.shape() != (n, n) {
            return Err(Error::Structure(format!("involution is {}x{} for {n} generators", iota.rows(), iota.cols())));
        }
        if iota.mul(&complex.d) != complex.d.mul(&iota) {
            return Err(Error::Precondition("the involution does not commute with the differential".into()));
        }
        if iota.mul(&iota) != Mat::identity(n) {
            return Err(Error::Precondition("the involution does not square to the identity".into()));
        }
        if let Some((t, s, _)) = iota
            .nonzero_entries()
            .find(|&(t, s, _)| complex.grading.class(complex.gens[t].degree) != complex.grading.class(complex.gens[s].degree))
        {
            return Err(Error::Precondition(format!(
                "the involution sends {} to {}, which has a different degree",
                complex.gens[s].name, complex.gens[t].name
            )));
        }
        Ok(InvolutiveComplex { complex, iota })
    }

    /// Involution given as a permutation of generator indices.
    pub fn from_permutation(complex: Complex<Gf2>, perm: &[usize]) -> Result<Self> {
        let n = complex.len();
        if perm.len() != n || perm.iter().any(|&p| p >= n) {
            return Err(Error::Structure("permutation has the wrong length or an index out of range".into()));
        }
        let iota = Mat::from_fn(n, n, |r, c| Gf2(perm[c] == r));
        InvolutiveComplex::new(complex, iota)
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn cohomology(&self) -> FieldCohomology<Gf2> {
        FieldCohomology::of(&self.complex.d)
    }

    /// Matrix of the involution induced on `H(V)` in the cocycle basis.
    pub fn induced_involution(&self) -> Mat<Gf2> {
        let h = self.cohomology();
        h.induced(&self.iota, &h).expect("the involution is a chain map")
    }
}

fn borel_matrix<R: Ring>(d: &Mat<Gf2>, iota: &Mat<Gf2>, h: R) -> Mat<R> {
    let n = d.rows();
    let norm = iota.add(&Mat::identity(n));
    lift_gf2::<R>(d).add(&lift_gf2::<R>(&norm).scale(&h))
}

/// The complex `(V[h], d_V + h (id + iota))`.
pub fn borel_complex(w: &InvolutiveComplex) -> Complex<HPoly> {
    Complex { gens: w.complex.gens.clone(), grading: w.complex.grading, d: borel_matrix(&w.complex.d, &w.iota, HPoly::monomial(1)) }
}

/// The Borel complex reduced mod `h^N`, as a complex over GF(2) with
/// generators `g h^j` at index `g * N + j`.
pub fn borel_truncated(w: &InvolutiveComplex, n: usize) -> Complex<Gf2> {
    let k = w.len();
    let mut gens = Vec::with_capacity(k * n);
    for g in &w.complex.gens {
        for j in 0..n {
            gens.push(Generator { name: format!("{} h^{j}", g.name), degree: g.degree + j as i64, action: None });
        }
    }
    let norm = w.iota.add(&Mat::identity(k));
    let mut d = Mat::zeros(k * n, k * n);
    for j in 0..n {
        for (t, s, _) in w.complex.d.nonzero_entries() {
            d.add_to(t * n + j, s * n + j, &Gf2::ONE);
        }
        if j + 1 < n {
            for (t, s, _) in norm.nonzero_entries() {
                d.add_to(t * n + j + 1, s * n + j, &Gf2::ONE);
            }
        }
    }
    Complex { gens, grading: w.complex.grading, d }
}

/// An equivariant map `f` extended to the truncated Borel complexes.
pub fn truncate_map(f: &Mat<Gf2>, n: usize) -> Mat<Gf2> {
    let mut out = Mat::zeros(f.rows() * n, f.cols() * n);
    for (t, s, _) in f.nonzero_entries() {
        for j in 0..n {
            out.set(t * n + j, s * n + j, Gf2::ONE);
        }
    }
    out
}

/// `H(Z/2; V)` as a module over the local ring: `F[[h]]^free ⊕ ⊕ F[h]/h^{a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqModuleInvariants {
    pub free_rank: usize,
    pub torsion_exponents: Vec<usize>,
    pub generator_count: usize,
}

impl EqModuleInvariants {
    pub fn from_parts(free_rank: usize, torsion_exponents: Vec<usize>) -> Self {
        EqModuleInvariants { free_rank, generator_count: free_rank + torsion_exponents.len(), torsion_exponents }
    }

    pub fn is_zero(&self) -> bool {
        self.generator_count == 0
    }

    /// GF(2)-dimension of the module reduced mod `h^N`.
    pub fn truncated_dim(&self, n: usize) -> usize {
        self.free_rank * n + self.torsion_exponents.iter().map(|&a| a.min(n)).sum::<usize>()
    }
}

pub fn module_invariants(d: &Mat<HPoly>) -> EqModuleInvariants {
    let h = module_cohomology(d);
    EqModuleInvariants::from_parts(h.free_rank, h.local_torsion_exponents)
}

pub fn group_cohomology(w: &InvolutiveComplex) -> EqModuleInvariants {
    module_invariants(&borel_complex(w).d)
}

/// Dimension of the Borel cohomology after extending scalars to GF(2)(h).
pub fn tate_dimension(w: &InvolutiveComplex) -> usize {
    let d: Mat<HRational> = poly_to_rational(&borel_complex(w).d);
    d.rows() - 2 * d.rank()
}

/// Checks `dim H(Borel mod h^N) = r N + 2 Σ min(a_i, N)` for `N = 1..=max_n`.
///
/// Cohomology of the truncation counts each free summand `N` times and
/// each torsion summand `F[h]/h^a` twice, once from the kernel of `h^N`.
pub fn truncation_agrees(w: &InvolutiveComplex, inv: &EqModuleInvariants, max_n: usize) -> bool {
    (1..=max_n).all(|n| {
        let c = borel_truncated(w, n);
        let dim = c.d.rows() - 2 * c.d.to_bits().rank();
        dim == inv.free_rank * n + 2 * inv.torsion_exponents.iter().map(|&a| a.min(n)).sum::<usize>()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithBoundReport {
    pub invariant_dim: usize,
    pub generator_count: usize,
    pub free_rank: usize,
    pub holds: bool,
}

/// `dim H(V)^iota >= dim H(Z/2;V)/h >= rank H(Z/2;V)`.
pub fn smith_bound_check(w: &InvolutiveComplex) -> SmithBoundReport {
    let i = w.induced_involution();
    let fixed = i.add(&Mat::identity(i.rows())).kernel().len();
    let inv = group_cohomology(w);
    SmithBoundReport {
        invariant_dim: fixed,
        generator_count: inv.generator_count,
        free_rank: inv.free_rank,
        holds: fixed >= inv.generator_count && inv.generator_count >= inv.free_rank,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionReport {
    pub position: String,
    pub composite_zero: bool,
    pub rank_in: usize,
    pub rank_out: usize,
    pub middle_dim: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub short_exact: bool,
    pub dims: [usize; 3],
    pub positions: Vec<PositionReport>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.short_exact && self.positions.iter().all(|p| p.exact)
    }
}

fn position(name: &str, f: &Mat<Gf2>, g: &Mat<Gf2>, middle: usize) -> PositionReport {
    let composite_zero = g.mul(f).is_zero();
    let (rank_in, rank_out) = (f.rank(), g.rank());
    PositionReport {
        position: name.into(),
        composite_zero,
        rank_in,
        rank_out,
        middle_dim: middle,
        exact: composite_zero && rank_in + rank_out == middle,
    }
}

/// The long exact sequence of `0 -> A -f-> B -g-> C -> 0`, with the
/// connecting map built by the snake lemma, checked for exactness at
/// `H(B)`, `H(C)` and `H(A)` by ranks.
pub fn les_exactness(a: &Mat<Gf2>, b: &Mat<Gf2>, c: &Mat<Gf2>, f: &Mat<Gf2>, g: &Mat<Gf2>) -> LesReport {
    let short_exact = f.rank() == f.cols()
        && g.rank() == g.rows()
        && g.mul(f).is_zero()
        && f.cols() + g.rows() == b.rows()
        && f.mul(a) == b.mul(f)
        && g.mul(b) == c.mul(g);
    let (ha, hb, hc) = (FieldCohomology::of(a), FieldCohomology::of(b), FieldCohomology::of(c));
    let dims = [ha.dim(), hb.dim(), hc.dim()];
    if !short_exact {
        return LesReport { short_exact, dims, positions: vec![] };
    }
    let fs = ha.induced(f, &hb).expect("chain map");
    let gs = hb.induced(g, &hc).expect("chain map");
    let delta_cols: Vec<Vec<Gf2>> = hc
        .reps()
        .iter()
        .map(|z| {
            let lift = g.solve(z).expect("g is surjective");
            let db = b.apply(&lift);
            let pre = f.solve(&db).expect("d of a lift lies in the image of f");
            ha.coords(&pre).expect("the snake produces a cocycle")
        })
        .collect();
    let delta = Mat::from_cols(ha.dim(), &delta_cols);
    LesReport {
        short_exact,
        dims,
        positions: vec![
            position("H(B)", &fs, &gs, hb.dim()),
            position("H(C)", &gs, &delta, hc.dim()),
            position("H(A)", &delta, &fs, ha.dim()),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct USequenceReport {
    pub truncation: usize,
    pub les: LesReport,
    pub exact: bool,
}

/// The sequence `0 -> C_{N-1} -h-> C_N -> V -> 0` of truncated Borel
/// complexes, with `N` past the largest torsion exponent so that the
/// multiplication-by-`h` map already sees the full module structure.
pub fn verify_u_sequence(w: &InvolutiveComplex) -> USequenceReport {
    let inv = group_cohomology(w);
    let n = 2.max(inv.torsion_exponents.iter().copied().max().unwrap_or(0) + 2);
    let k = w.len();
    let small = borel_truncated(w, n - 1);
    let big = borel_truncated(w, n);
    let mut times_h = Mat::zeros(k * n, k * (n - 1));
    for g in 0..k {
        for j in 0..n - 1 {
            times_h.set(g * n + j + 1, g * (n - 1) + j, Gf2::ONE);
        }
    }
    let mut set_h_zero = Mat::zeros(k, k * n);
    for g in 0..k {
        set_h_zero.set(g, g * n, Gf2::ONE);
    }
    let les = les_exactness(&small.d, &big.d, &w.complex.d, &times_h, &set_h_zero);
    USequenceReport { truncation: n, exact: les.exact(), les }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Grading;

    pub(crate) fn trivial_point() -> InvolutiveComplex {
        let c = Complex::new(vec![Generator::new("v", 0)], Grading::Z, Mat::zeros(1, 1)).unwrap();
        InvolutiveComplex::from_permutation(c, &[0]).unwrap()
    }

    pub(crate) fn regular() -> InvolutiveComplex {
        let c = Complex::new(vec![Generator::new("a", 0), Generator::new("b", 0)], Grading::Z, Mat::zeros(2, 2)).unwrap();
        InvolutiveComplex::from_permutation(c, &[1, 0]).unwrap()
    }

    fn arrow() -> InvolutiveComplex {
        let mut d = Mat::zeros(2, 2);
        d.set(1, 0, Gf2::ONE);
        let c = Complex::new(vec![Generator::new("x", 0), Generator::new("y", 1)], Grading::Z, d).unwrap();
        InvolutiveComplex::from_permutation(c, &[0, 1]).unwrap()
    }

    #[test]
    fn borel_examples() {
        assert!(borel_complex(&trivial_point()).d.is_zero());
        let h = HPoly::monomial(1);
        assert_eq!(borel_complex(&regular()).d, Mat::from_rows(vec![vec![h.clone(), h.clone()], vec![h.clone(), h]]));
        let b = borel_complex(&arrow());
        assert_eq!(b.d.nonzero_entries().count(), 1);
        assert!(b.check(false).is_valid());
    }

    #[test]
    fn group_and_tate_cohomology() {
        assert_eq!(group_cohomology(&trivial_point()), EqModuleInvariants::from_parts(1, vec![]));
        assert_eq!(group_cohomology(&regular()), EqModuleInvariants::from_parts(0, vec![1]));
        assert!(group_cohomology(&arrow()).is_zero());
        assert_eq!(tate_dimension(&regular()), 0);
        assert_eq!(tate_dimension(&trivial_point()), 1);
        for w in [trivial_point(), regular(), arrow()] {
            assert!(truncation_agrees(&w, &group_cohomology(&w), 6));
        }
    }

    #[test]
    fn smith_bounds() {
        let r = smith_bound_check(&trivial_point());
        assert_eq!((r.invariant_dim, r.generator_count, r.free_rank), (1, 1, 1));
        let r = smith_bound_check(&regular());
        assert_eq!((r.invariant_dim, r.generator_count, r.free_rank), (1, 1, 0));
        assert!(r.holds);
    }

    #[test]
    fn u_sequences() {
        for w in [trivial_point(), regular(), arrow()] {
            let r = verify_u_sequence(&w);
            assert!(r.exact, "{r:?}");
        }
        let r = verify_u_sequence(&regular());
        // restriction H(C_N) -> H(V) = K^2 has rank 1: the diagonal line
        let restriction = &r.les.positions[0];
        assert_eq!(restriction.rank_out, 1);
    }

    #[test]
    fn rejects_non_chain_involution() {
        let mut d = Mat::zeros(3, 3);
        d.set(1, 0, Gf2::ONE);
        let c = Complex::new(vec![Generator::new("x", 0), Generator::new("y1", 1), Generator::new("y2", 1)], Grading::Z, d).unwrap();
        assert!(InvolutiveComplex::from_permutation(c, &[0, 2, 1]).is_err());
    }
}
