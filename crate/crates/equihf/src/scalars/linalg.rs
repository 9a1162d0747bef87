use std::fmt;

use super::gf2::{BitMatrix, Gf2};
use super::poly::HPoly;
use super::rational::HRational;

/// A commutative ring of characteristic 2, so negation is the identity.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
}

impl Ring for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn one() -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        Gf2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Gf2(self.0 & other.0)
    }
}

impl Field for Gf2 {
    fn inv(&self) -> Self {
        assert!(self.0, "inverse of zero in GF(2)");
        *self
    }
}

impl Ring for HPoly {
    fn zero() -> Self {
        HPoly::zero()
    }
    fn one() -> Self {
        HPoly::one()
    }
    fn is_zero(&self) -> bool {
        HPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        HPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        HPoly::mul(self, other)
    }
}

impl Ring for HRational {
    fn zero() -> Self {
        HRational::zero()
    }
    fn one() -> Self {
        HRational::one()
    }
    fn is_zero(&self) -> bool {
        HRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        HRational::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        HRational::mul(self, other)
    }
}

impl Field for HRational {
    fn inv(&self) -> Self {
        HRational::inv(self).expect("inverse of zero in GF(2)(h)")
    }
}

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Mat { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<R>]) -> Self {
        Mat::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &R) {
        let e = &mut self.data[r * self.cols + c];
        *e = e.add(v);
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<R> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in Mat::add");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &R) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in Mat::mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.add_to(r, c, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols, "vector length mismatch in Mat::apply");
        (0..self.rows)
            .map(|r| {
                let mut acc = R::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += f * row[src]`.
    pub fn add_row_multiple(&mut self, src: usize, dst: usize, f: &R) {
        for c in 0..self.cols {
            let s = self.get(src, c);
            if !s.is_zero() {
                let v = s.mul(f);
                self.add_to(dst, c, &v);
            }
        }
    }

    /// `col[dst] += f * col[src]`.
    pub fn add_col_multiple(&mut self, src: usize, dst: usize, f: &R) {
        for r in 0..self.rows {
            let s = self.get(r, src);
            if !s.is_zero() {
                let v = s.mul(f);
                self.add_to(r, dst, &v);
            }
        }
    }

    pub fn scale_row(&mut self, r: usize, f: &R) {
        for c in 0..self.cols {
            let v = self.get(r, c).mul(f);
            self.set(r, c, v);
        }
    }

    pub fn scale_col(&mut self, c: usize, f: &R) {
        for r in 0..self.rows {
            let v = self.get(r, c).mul(f);
            self.set(r, c, v);
        }
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &R)> + '_ {
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn is_diagonal(&self) -> bool {
        self.nonzero_entries().all(|(r, c, _)| r == c)
    }
}

impl<R: Field> Mat<R> {
    /// Reduced row echelon form and the pivot columns, pivots chosen as the
    /// first nonzero entry scanning rows top to bottom in each column.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    m.add_row_multiple(r, i, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right null space basis, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<R>> {
        let (red, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![R::zero(); self.cols];
                v[free] = R::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = red.get(row, free).clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = b` with zeros in the free columns.
    pub fn solve(&self, b: &[R]) -> Option<Vec<R>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Mat::from_cols(self.rows, &[b.to_vec()]));
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![R::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (red, pivots) = self.hstack(&Mat::identity(n)).rref();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p >= n) {
            return None;
        }
        Some(Mat::from_fn(n, n, |r, c| red.get(r, n + c).clone()))
    }

    /// Basis of the column space: the pivot columns of the matrix itself.
    pub fn column_space(&self) -> Vec<Vec<R>> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|c| self.col(c)).collect()
    }
}

impl Mat<Gf2> {
    pub fn to_bits(&self) -> BitMatrix {
        BitMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).0)
    }

    pub fn from_bits(b: &BitMatrix) -> Self {
        Mat::from_fn(b.rows(), b.cols(), |r, c| Gf2(b.get(r, c)))
    }
}

impl<R: fmt::Display> fmt::Display for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols].iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<R: fmt::Debug> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Extend scalars from GF(2) to any ring.
pub fn lift_gf2<R: Ring>(m: &Mat<Gf2>) -> Mat<R> {
    m.map(|b| if b.0 { R::one() } else { R::zero() })
}

pub fn poly_to_rational(m: &Mat<HPoly>) -> Mat<HRational> {
    m.map(|p| HRational::from_poly(p.clone()))
}

/// Reduce a polynomial matrix mod h.
pub fn poly_mod_h(m: &Mat<HPoly>) -> Mat<Gf2> {
    m.map(|p| Gf2(p.constant_term()))
}

/// `B ⊆ Z` inside `R^n`, presented by explicit representatives of `Z / B`.
///
/// The representatives are the vectors of the given spanning set of `Z` that
/// are not in the span of `B` and the earlier vectors, which is leftmost-pivot
/// elimination on the block matrix `[B | Z]`.
#[derive(Clone, Debug)]
pub struct Subquotient<R> {
    pub dim: usize,
    pub sub: Vec<Vec<R>>,
    pub reps: Vec<Vec<R>>,
    basis: Option<Mat<R>>,
}

impl<R: Field> Subquotient<R> {
    pub fn new(dim: usize, sub_span: &[Vec<R>], top_span: &[Vec<R>]) -> Self {
        let all: Vec<Vec<R>> = sub_span.iter().chain(top_span).cloned().collect();
        let (_, pivots) = if all.is_empty() { (Mat::zeros(dim, 0), vec![]) } else { Mat::from_cols(dim, &all).rref() };
        let mut sub = Vec::new();
        let mut reps = Vec::new();
        for p in pivots {
            if p < sub_span.len() {
                sub.push(sub_span[p].clone());
            } else {
                reps.push(top_span[p - sub_span.len()].clone());
            }
        }
        let cols: Vec<Vec<R>> = sub.iter().chain(&reps).cloned().collect();
        let basis = if cols.is_empty() { None } else { Some(Mat::from_cols(dim, &cols)) };
        Subquotient { dim, sub, reps, basis }
    }

    pub fn quotient_dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of `v` in the quotient, or `None` if `v` is not in `Z`.
    pub fn coords(&self, v: &[R]) -> Option<Vec<R>> {
        if v.iter().all(Ring::is_zero) {
            return Some(vec![R::zero(); self.reps.len()]);
        }
        let x = self.basis.as_ref()?.solve(v)?;
        Some(x[self.sub.len()..].to_vec())
    }

    /// True if `v` lies in `B`.
    pub fn is_trivial(&self, v: &[R]) -> bool {
        self.coords(v).is_some_and(|c| c.iter().all(Ring::is_zero))
    }
}

/// Cohomology of a square matrix `d` with `d^2 = 0` over a field, with
/// cocycle representatives for a basis.
#[derive(Clone, Debug)]
pub struct FieldCohomology<R> {
    pub cycles: Vec<Vec<R>>,
    pub quotient: Subquotient<R>,
}

impl<R: Field> FieldCohomology<R> {
    pub fn of(d: &Mat<R>) -> Self {
        let cycles = d.kernel();
        let boundaries = d.column_space();
        FieldCohomology { quotient: Subquotient::new(d.rows(), &boundaries, &cycles), cycles }
    }

    pub fn dim(&self) -> usize {
        self.quotient.quotient_dim()
    }

    pub fn reps(&self) -> &[Vec<R>] {
        &self.quotient.reps
    }

    pub fn coords(&self, v: &[R]) -> Option<Vec<R>> {
        self.quotient.coords(v)
    }

    /// Matrix of the map induced by `f` from this cohomology to `target`;
    /// `None` if `f` sends a representative outside the target cocycles.
    pub fn induced(&self, f: &Mat<R>, target: &FieldCohomology<R>) -> Option<Mat<R>> {
        let cols: Option<Vec<Vec<R>>> = self.reps().iter().map(|v| target.coords(&f.apply(v))).collect();
        Some(Mat::from_cols(target.dim(), &cols?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(s: &str) -> HRational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_matrix_with_nonzero_determinant_is_invertible() {
        let m = Mat::from_rows(vec![vec![hp("h"), hp("1")], vec![hp("1"), hp("h")]]);
        assert_eq!(m.rank(), 2);
        assert!(m.kernel().is_empty());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert_eq!(Mat::<HRational>::zeros(0, 0).inverse(), Some(Mat::zeros(0, 0)));
    }

    #[test]
    fn kernel_and_rank_add_up() {
        let m: Mat<Gf2> = Mat::from_rows(vec![
            vec![Gf2(true), Gf2(true), Gf2(false)],
            vec![Gf2(false), Gf2(true), Gf2(true)],
            vec![Gf2(true), Gf2(false), Gf2(true)],
        ]);
        let ker = m.kernel();
        assert_eq!(m.rank() + ker.len(), 3);
        for v in &ker {
            assert!(m.apply(v).iter().all(Ring::is_zero));
        }
        assert_eq!(m.to_bits().rank(), m.rank());
    }

    #[test]
    fn cohomology_of_a_two_step_complex() {
        let d: Mat<Gf2> = Mat::from_rows(vec![vec![Gf2(false), Gf2(false)], vec![Gf2(true), Gf2(false)]]);
        assert_eq!(FieldCohomology::of(&d).dim(), 0);
        let zero: Mat<Gf2> = Mat::zeros(3, 3);
        let h = FieldCohomology::of(&zero);
        assert_eq!(h.dim(), 3);
        assert_eq!(h.induced(&Mat::identity(3), &h).unwrap(), Mat::identity(3));
    }

    #[test]
    fn subquotient_coordinates() {
        let g = |bits: &[u8]| bits.iter().map(|&b| Gf2::from(b)).collect::<Vec<_>>();
        let q = Subquotient::new(3, &[g(&[1, 1, 0])], &[g(&[1, 0, 0]), g(&[0, 1, 0]), g(&[0, 0, 1])]);
        assert_eq!(q.quotient_dim(), 2);
        assert_eq!(q.reps, vec![g(&[1, 0, 0]), g(&[0, 0, 1])]);
        assert_eq!(q.coords(&g(&[0, 1, 0])).unwrap(), g(&[1, 0]));
        assert!(q.is_trivial(&g(&[1, 1, 0])));
    }
}
