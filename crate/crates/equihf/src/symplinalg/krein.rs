//! The Krein index: the signature of `<h1, h2> = i ω(conj h1, h2)` on the
//! sum of generalized eigenspaces of `A` for eigenvalues on the unit
//! circle with positive imaginary part.
//!
//! Eigenvalues are clustered, and each cluster's generalized eigenspace is
//! obtained from a Riesz projector (a contour integral of the resolvent),
//! which stays accurate when a Krein collision produces a Jordan block.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use super::matrix::{eigenvalues, j0, SympMatrix};
use crate::error::{Error, Result};

type C = Complex<f64>;

const CONTOUR_POINTS: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenCluster {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub signature: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KreinResult {
    pub kappa: i64,
    pub e_dim: usize,
    pub eigen_clusters: Vec<EigenCluster>,
}

fn clusters(ev: &[C], radius: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..ev.len()).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            if (ev[i] - ev[j]).norm() <= radius {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for i in 0..ev.len() {
        let r = root(&mut label, i);
        let g = *seen.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

fn riesz_projector(a: &DMatrix<C>, center: C, rho: f64) -> Result<DMatrix<C>> {
    let size = a.nrows();
    let mut p = DMatrix::<C>::zeros(size, size);
    let id = DMatrix::<C>::identity(size, size);
    for k in 0..CONTOUR_POINTS {
        let w = C::from_polar(1.0, 2.0 * PI * k as f64 / CONTOUR_POINTS as f64);
        let z = center + w * rho;
        let res = (&id * z - a).try_inverse().ok_or_else(|| Error::IllConditioned("resolvent is singular on the contour".into()))?;
        p += res * (w * rho);
    }
    Ok(p / C::new(CONTOUR_POINTS as f64, 0.0))
}

fn signature(g: &DMatrix<C>, scale: f64) -> Result<(i64, usize)> {
    let herm = (g + g.adjoint()) * C::new(0.5, 0.0);
    let ev = herm.symmetric_eigen().eigenvalues;
    let floor = 1e-8 * scale.max(1.0);
    let (mut pos, mut neg) = (0i64, 0i64);
    for &x in ev.iter() {
        if x.abs() <= floor {
            return Err(Error::IllConditioned(format!("the Krein form is degenerate (eigenvalue {x:e})")));
        }
        if x > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Ok((pos - neg, ev.len()))
}

pub fn krein_index(a: &SympMatrix) -> Result<KreinResult> {
    a.require_star_star()?;
    let tol = a.tol.eig;
    let ev = eigenvalues(&a.m);
    for l in &ev {
        let off = (l.norm() - 1.0).abs();
        if off > tol && off <= 2.0 * tol {
            return Err(Error::IllConditioned(format!("eigenvalue {l} is ambiguously close to the unit circle")));
        }
    }
    let ac: DMatrix<C> = a.m.map(|x| C::new(x, 0.0));
    let jc: DMatrix<C> = j0(a.n).map(|x| C::new(x, 0.0));
    let mut out = KreinResult { kappa: 0, e_dim: 0, eigen_clusters: Vec::new() };
    for group in clusters(&ev, 10.0 * tol) {
        let members: Vec<C> = group.iter().map(|&i| ev[i]).collect();
        let on_circle = members.iter().all(|l| (l.norm() - 1.0).abs() <= tol);
        let upper = members.iter().all(|l| l.im > 0.0);
        if !on_circle || !upper {
            if members.iter().any(|l| (l.norm() - 1.0).abs() <= tol && l.im > 0.0) {
                return Err(Error::IllConditioned("a unit-circle eigenvalue clusters with one off the circle or on the real axis".into()));
            }
            continue;
        }
        let m = members.len();
        let center = members.iter().sum::<C>() / C::new(m as f64, 0.0);
        let r_in = members.iter().map(|l| (l - center).norm()).fold(0.0, f64::max);
        let r_out =
            ev.iter().enumerate().filter(|(i, _)| !group.contains(i)).map(|(_, l)| (l - center).norm()).fold(f64::INFINITY, f64::min);
        let rho = if r_out.is_finite() { 0.5 * (r_in + r_out) } else { r_in + 1.0 };
        let p = riesz_projector(&ac, center, rho)?;
        // The range of P is spanned by the eigenvectors of P P^* with large eigenvalues.
        let eig = (&p * p.adjoint()).symmetric_eigen();
        let range: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > 0.25).collect();
        if range.len() != m {
            return Err(Error::IllConditioned(format!("spectral projector has rank {}, expected {m}", range.len())));
        }
        let v = eig.eigenvectors.select_columns(&range);
        let g = (v.adjoint() * &jc * &v) * C::new(0.0, 1.0);
        let (sig, _) = signature(&g, 1.0)?;
        out.kappa += sig;
        out.e_dim += m;
        out.eigen_clusters.push(EigenCluster { re: center.re, im: center.im, multiplicity: m, signature: sig });
    }
    let parity_lhs = if out.kappa.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let parity_rhs = if a.n.is_multiple_of(2) { 1.0 } else { -1.0 } * a.det_i_minus_sq().signum();
    if parity_lhs != parity_rhs {
        return Err(Error::IllConditioned(format!(
            "parity check failed: kappa = {}, n = {}, sign det(I - A^2) = {}",
            out.kappa,
            a.n,
            a.det_i_minus_sq().signum()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplinalg::matrix::{direct_sum, random_symplectic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rot(theta: f64) -> SympMatrix {
        let (s, c) = theta.sin_cos();
        SympMatrix::with_default_tol(DMatrix::from_row_slice(2, 2, &[c, -s, s, c])).unwrap()
    }

    #[test]
    fn rotations() {
        for t in [0.3, 1.0, 2.5] {
            assert_eq!(krein_index(&rot(t)).unwrap().kappa, 1);
            assert_eq!(krein_index(&rot(-t)).unwrap().kappa, -1);
        }
        let r = krein_index(&direct_sum(&[rot(0.7), rot(-0.7)])).unwrap();
        assert_eq!((r.kappa, r.e_dim), (0, 2));
    }

    #[test]
    fn hyperbolic_has_empty_e() {
        let d = SympMatrix::with_default_tol(DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0])).unwrap();
        let r = krein_index(&d).unwrap();
        assert_eq!((r.kappa, r.e_dim), (0, 0));
    }

    #[test]
    fn collision_of_equal_signs_is_stable() {
        let r = krein_index(&direct_sum(&[rot(1.1), rot(1.1)])).unwrap();
        assert_eq!((r.kappa, r.e_dim, r.eigen_clusters.len()), (2, 2, 1));
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = direct_sum(&[rot(0.4), rot(-2.0)]);
        for _ in 0..10 {
            let p = random_symplectic(&mut rng, 2, 0.4);
            let pinv = p.clone().try_inverse().unwrap();
            let b = SympMatrix::with_default_tol(&p * &a.m * pinv).unwrap();
            assert_eq!(krein_index(&b).unwrap().kappa, 0);
        }
    }

    #[test]
    fn rejects_minus_one() {
        assert!(krein_index(&rot(PI)).is_err());
    }
}
