use std::fmt;

/// An element of GF(2).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf2(pub bool);

impl Gf2 {
    pub const ZERO: Gf2 = Gf2(false);
    pub const ONE: Gf2 = Gf2(true);
}

impl From<bool> for Gf2 {
    fn from(b: bool) -> Self {
        Gf2(b)
    }
}

impl From<u8> for Gf2 {
    fn from(b: u8) -> Self {
        Gf2(b & 1 == 1)
    }
}

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl fmt::Debug for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

const W: usize = 64;

fn words_for(cols: usize) -> usize {
    cols.div_ceil(W)
}

/// A dense GF(2) matrix with rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Rows given as 0/1 bytes; every row must have length `cols`.
    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        BitMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c] & 1 == 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.stride + c / W] >> (c % W) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / W];
        if v {
            *w |= 1 << (c % W);
        } else {
            *w &= !(1 << (c % W));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / W] ^= 1 << (c % W);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] += row[src]`.
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.bits[dst * self.stride..(dst + 1) * self.stride].fill(0);
            return;
        }
        for k in 0..self.stride {
            let s = self.bits[src * self.stride + k];
            self.bits[dst * self.stride + k] ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.bits.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn col(&self, c: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in BitMatrix::add");
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in BitMatrix::mul");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for w in 0..out.stride {
                        out.bits[r * out.stride + w] ^= other.bits[k * other.stride + w];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| (0..self.cols).filter(|&c| v[c] && self.get(r, c)).count() % 2 == 1).collect()
    }

    /// Stack `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows);
        BitMatrix::from_fn(
            self.rows,
            self.cols + other.cols,
            |r, c| {
                if c < self.cols {
                    self.get(r, c)
                } else {
                    other.get(r, c - self.cols)
                }
            },
        )
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = self.clone();
        out.rows += other.rows;
        out.bits.extend_from_slice(&other.bits);
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                if m.get(i, c) {
                    m.xor_row(i, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    /// A basis of the right null space, one vector per free column,
    /// listed in increasing order of the free column.
    pub fn kernel(&self) -> Vec<Vec<bool>> {
        let (red, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![false; self.cols];
            v[free] = true;
            for (row, &p) in pivots.iter().enumerate() {
                if red.get(row, free) {
                    v[p] = true;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[bool]) -> Option<Vec<bool>> {
        self.solve_affine(b).map(|(x, _)| x)
    }

    /// The full solution set of `self * x = b` as a particular solution plus a
    /// kernel basis. The particular solution has zeros in all free columns.
    pub fn solve_affine(&self, b: &[bool]) -> Option<(Vec<bool>, Vec<Vec<bool>>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for (r, &br) in b.iter().enumerate() {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols, br);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![false; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(row, self.cols);
        }
        Some((x, self.kernel()))
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&BitMatrix::identity(n));
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(BitMatrix::from_fn(n, n, |r, c| aug.get(r, n + c)))
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let words = self.row_words(r);
            words.iter().enumerate().flat_map(move |(k, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((r, k * W + t))
                })
            })
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Rank and a kernel basis of a GF(2) matrix, the common entry point for
/// callers that only need those two facts.
pub fn gf2_rank_kernel(m: &BitMatrix) -> (usize, Vec<Vec<bool>>) {
    (m.rank(), m.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_two_by_two() {
        let m = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        let (rank, ker) = gf2_rank_kernel(&m);
        assert_eq!(rank, 1);
        assert_eq!(ker, vec![vec![true, true]]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let (rank, ker) = gf2_rank_kernel(&BitMatrix::identity(70));
        assert_eq!(rank, 70);
        assert!(ker.is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = BitMatrix::from_rows(&[vec![1, 0, 1, 1, 0], vec![0, 1, 1, 0, 1], vec![1, 1, 0, 1, 1]], 5);
        let ker = m.kernel();
        assert_eq!(m.rank() + ker.len(), 5);
        for v in ker {
            assert!(m.apply(&v).iter().all(|b| !b));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = BitMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]], 3);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BitMatrix::identity(3));
        let x = m.solve(&[true, false, true]).unwrap();
        assert_eq!(m.apply(&x), vec![true, false, true]);
        let singular = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        assert!(singular.solve(&[true, false]).is_none());
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn nonzero_entries_across_words() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 3, true);
        m.set(1, 64, true);
        m.set(1, 129, true);
        let e: Vec<_> = m.nonzero_entries().collect();
        assert_eq!(e, vec![(0, 3), (1, 64), (1, 129)]);
    }
}
