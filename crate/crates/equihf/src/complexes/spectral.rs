//! The spectral sequence of a finitely filtered complex over a field.
//!
//! Filtrations are normalized to be decreasing, `F^p = span{g : w(g) >= p}`,
//! and the differential must map `F^p` into itself. With
//! `Z_r^p = {x in F^p : dx in F^{p+r}}` the pages are
//! `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`, computed separately
//! in each degree class, and `d_r` is induced by `d`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::{total_cohomology, Complex, Grading, Scalar};
use crate::error::{Error, Result};
use crate::scalars::{Field, Mat, Ring, Subquotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `F^p` is spanned by generators of weight at least `p`.
    Decreasing,
    /// `F_p` is spanned by generators of weight at most `p`.
    Increasing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub weights: Vec<i64>,
    pub direction: Direction,
}

impl Filtration {
    pub fn decreasing(weights: Vec<i64>) -> Self {
        Filtration { weights, direction: Direction::Decreasing }
    }

    pub fn increasing(weights: Vec<i64>) -> Self {
        Filtration { weights, direction: Direction::Increasing }
    }

    fn normalized(&self) -> Vec<i64> {
        match self.direction {
            Direction::Decreasing => self.weights.clone(),
            Direction::Increasing => self.weights.iter().map(|w| -w).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Page<R> {
    pub r: usize,
    /// `dim E_r^{p,k}` keyed by (filtration level p, degree class k), zeros omitted.
    pub dims: BTreeMap<(i64, i64), usize>,
    /// Matrix of `d_r : E_r^{p,k} -> E_r^{p+r,k+1}` keyed by the source.
    pub differentials: BTreeMap<(i64, i64), Mat<R>>,
}

impl<R: Ring> Page<R> {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn differential_is_zero(&self) -> bool {
        self.differentials.values().all(Mat::is_zero)
    }

    /// Dimensions summed over filtration level, per degree class.
    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(_, k), &d) in &self.dims {
            *out.entry(k).or_insert(0) += d;
        }
        out
    }

    pub fn dims_by_level(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(p, _), &d) in &self.dims {
            *out.entry(p).or_insert(0) += d;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SpectralSequence<R> {
    pub pages: Vec<Page<R>>,
    /// First page from which every differential vanishes.
    pub stabilization: usize,
    pub e_infinity_total: usize,
    pub cohomology_total: usize,
    /// Every page has the dimensions of the cohomology of the previous one.
    pub pages_consistent: bool,
}

impl<R: Ring> SpectralSequence<R> {
    pub fn page(&self, r: usize) -> &Page<R> {
        &self.pages[r.min(self.pages.len() - 1)]
    }

    pub fn converges(&self) -> bool {
        self.pages_consistent && self.e_infinity_total == self.cohomology_total
    }
}

struct Setup<'a, R> {
    c: &'a Complex<R>,
    w: Vec<i64>,
    classes: BTreeMap<i64, Vec<usize>>,
}

impl<R: Field + Scalar> Setup<'_, R> {
    fn unit(&self, i: usize) -> Vec<R> {
        let mut v = vec![R::zero(); self.c.len()];
        v[i] = R::one();
        v
    }

    /// Basis of `Z_r^{p}` in degree class `k`.
    fn z(&self, r: i64, p: i64, k: i64) -> Vec<Vec<R>> {
        let Some(idx) = self.classes.get(&k) else {
            return vec![];
        };
        let cols: Vec<usize> = idx.iter().copied().filter(|&i| self.w[i] >= p).collect();
        if cols.is_empty() {
            return vec![];
        }
        if r <= 0 {
            return cols.iter().map(|&i| self.unit(i)).collect();
        }
        let rows: Vec<usize> = (0..self.c.len()).filter(|&i| self.w[i] < p + r).collect();
        let ker = if rows.is_empty() {
            (0..cols.len())
                .map(|j| {
                    let mut v = vec![R::zero(); cols.len()];
                    v[j] = R::one();
                    v
                })
                .collect()
        } else {
            self.c.d.select(&rows, &cols).kernel()
        };
        ker.into_iter()
            .map(|small| {
                let mut v = vec![R::zero(); self.c.len()];
                for (j, x) in small.into_iter().enumerate() {
                    v[cols[j]] = x;
                }
                v
            })
            .collect()
    }

    fn page_piece(&self, r: i64, p: i64, k: i64) -> Subquotient<R> {
        let top = self.z(r, p, k);
        let mut sub = self.z(r - 1, p + 1, k);
        let prev = self.c.grading.prev_class(k);
        for x in self.z(r - 1, p - r + 1, prev) {
            sub.push(self.c.d.apply(&x));
        }
        Subquotient::new(self.c.len(), &sub, &top)
    }
}

/// Compute every page up to `E_{spread + 1} = E_infinity`.
pub fn spectral_sequence<R: Field + Scalar>(c: &Complex<R>, f: &Filtration) -> Result<SpectralSequence<R>> {
    if f.weights.len() != c.len() {
        return Err(Error::Structure(format!("{} weights for {} generators", f.weights.len(), c.len())));
    }
    let w = f.normalized();
    for (t, s, _) in c.d.nonzero_entries() {
        if w[t] < w[s] {
            return Err(Error::Filtration(format!("d({}) has a term on {} of lower filtration level", c.gens[s].name, c.gens[t].name)));
        }
    }
    let setup = Setup { c, w: w.clone(), classes: c.degree_classes() };
    let (lo, hi) = match (w.iter().min(), w.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    };
    let last = (hi - lo + 1) as usize;
    let class_keys: Vec<i64> = setup.classes.keys().copied().collect();
    let mut pages = Vec::new();
    for r in 0..=last {
        let mut pieces = BTreeMap::new();
        for p in lo..=hi {
            for &k in &class_keys {
                pieces.insert((p, k), setup.page_piece(r as i64, p, k));
            }
        }
        let mut dims = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for (&(p, k), q) in &pieces {
            if q.quotient_dim() == 0 {
                continue;
            }
            dims.insert((p, k), q.quotient_dim());
            let tk = c.grading.next_class(k);
            let cols: Vec<Vec<R>> = match pieces.get(&(p + r as i64, tk)) {
                Some(target) => {
                    q.reps.iter().map(|x| target.coords(&c.d.apply(x)).expect("d lands in the cycles of the target page")).collect()
                }
                None => q.reps.iter().map(|_| vec![]).collect(),
            };
            let rows = pieces.get(&(p + r as i64, tk)).map_or(0, Subquotient::quotient_dim);
            differentials.insert((p, k), Mat::from_cols(rows, &cols));
        }
        pages.push(Page { r, dims, differentials });
    }
    let mut consistent = true;
    for r in 0..pages.len() - 1 {
        let (cur, next) = (&pages[r], &pages[r + 1]);
        let keys: Vec<(i64, i64)> = cur.dims.keys().chain(next.dims.keys()).copied().collect();
        for (p, k) in keys {
            let dim = cur.dims.get(&(p, k)).copied().unwrap_or(0);
            let out_rank = cur.differentials.get(&(p, k)).map_or(0, Mat::rank);
            let src = (p - r as i64, c.grading.prev_class(k));
            let in_rank = cur.differentials.get(&src).map_or(0, Mat::rank);
            if next.dims.get(&(p, k)).copied().unwrap_or(0) != dim - out_rank - in_rank {
                consistent = false;
            }
        }
    }
    let stabilization = (0..pages.len()).find(|&r| pages[r..].iter().all(Page::differential_is_zero)).unwrap_or(last);
    let e_infinity_total = pages.last().map_or(0, Page::total_dim);
    Ok(SpectralSequence { pages, stabilization, e_infinity_total, cohomology_total: total_cohomology(&c.d), pages_consistent: consistent })
}

/// Convenience for complexes without a useful grading.
pub fn ungraded<R: Scalar>(c: &Complex<R>) -> Complex<R> {
    Complex { gens: c.gens.clone(), grading: Grading::None, d: c.d.clone() }
}
