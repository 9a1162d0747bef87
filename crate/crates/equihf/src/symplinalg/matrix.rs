use nalgebra::{Complex, DMatrix};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on `max |A^T J0 A - J0|`.
    pub sp: f64,
    /// Distance from the unit circle, or from ±1, below which an eigenvalue counts as on it.
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { sp: 1e-9, eig: 1e-6 }
    }
}

/// The standard form `dp_1 ∧ dq_1 + ...` in coordinates `(p_1, q_1, p_2, q_2, ...)`.
pub fn j0(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

pub fn symplectic_residual(a: &DMatrix<f64>) -> f64 {
    let j = j0(a.nrows() / 2);
    max_abs(&(a.transpose() * &j * a - j))
}

/// The Hamiltonian matrix `B = J0^{-1} S` of the quadratic form `x^T S x`.
pub fn hamiltonian_of(s: &DMatrix<f64>) -> DMatrix<f64> {
    -j0(s.nrows() / 2) * s
}

/// The symmetric matrix `S = J0 B` with `B = J0^{-1} S`.
pub fn form_of(b: &DMatrix<f64>) -> DMatrix<f64> {
    j0(b.nrows() / 2) * b
}

/// Number of negative eigenvalues of a symmetric matrix; `None` if some
/// eigenvalue is within `1e-9` of zero.
/// Orthogonal factor `U` of the polar decomposition `M = U P`, by the
/// scaled Newton iteration `U <- (g U + U^{-T} / g) / 2`.
pub fn orthogonal_factor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut u = m.clone();
    for _ in 0..100 {
        let Some(inv_t) = u.clone().try_inverse().map(|i| i.transpose()) else {
            break;
        };
        let g = (inv_t.norm() / u.norm()).sqrt();
        let next = (&u * g + inv_t / g) * 0.5;
        let step = (&next - &u).amax();
        u = next;
        if step < 1e-15 * (1.0 + u.amax()) {
            break;
        }
    }
    u
}

pub fn morse_index(s: &DMatrix<f64>) -> Option<usize> {
    let ev = s.clone().symmetric_eigen().eigenvalues;
    if ev.iter().any(|x| x.abs() < 1e-9) {
        return None;
    }
    Some(ev.iter().filter(|&&x| x < 0.0).count())
}

pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex<f64>> {
    a.complex_eigenvalues().iter().copied().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SympMatrix {
    pub n: usize,
    pub m: DMatrix<f64>,
    pub tol: Tolerances,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub sp: bool,
    /// No eigenvalue 1.
    pub sp_star: bool,
    /// Neither 1 nor -1 is an eigenvalue.
    pub sp_star_star: bool,
}

impl SympMatrix {
    pub fn new(m: DMatrix<f64>, tol: Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(Error::Structure(format!("a symplectic matrix must be 2n x 2n, got {}x{}", m.nrows(), m.ncols())));
        }
        let r = symplectic_residual(&m);
        if r.is_nan() || r > tol.sp {
            return Err(Error::Precondition(format!("not symplectic: max |A^T J0 A - J0| = {r:e}")));
        }
        Ok(SympMatrix { n: m.nrows() / 2, m, tol })
    }

    pub fn with_default_tol(m: DMatrix<f64>) -> Result<Self> {
        SympMatrix::new(m, Tolerances::default())
    }

    pub fn identity(n: usize) -> Self {
        SympMatrix { n, m: DMatrix::identity(2 * n, 2 * n), tol: Tolerances::default() }
    }

    pub fn membership(&self) -> Membership {
        let ev = eigenvalues(&self.m);
        let near = |t: f64| ev.iter().any(|l| (l - Complex::new(t, 0.0)).norm() <= self.tol.eig);
        let star = !near(1.0);
        Membership { sp: true, sp_star: star, sp_star_star: star && !near(-1.0) }
    }

    /// `det(I - A)`.
    pub fn det_i_minus(&self) -> f64 {
        (DMatrix::identity(2 * self.n, 2 * self.n) - &self.m).determinant()
    }

    /// `det(I - A^2)`.
    pub fn det_i_minus_sq(&self) -> f64 {
        (DMatrix::identity(2 * self.n, 2 * self.n) - &self.m * &self.m).determinant()
    }

    pub fn mul(&self, other: &SympMatrix) -> SympMatrix {
        SympMatrix { n: self.n, m: &self.m * &other.m, tol: self.tol }
    }

    pub fn require_star_star(&self) -> Result<()> {
        if self.membership().sp_star_star {
            Ok(())
        } else {
            Err(Error::Precondition("the matrix has eigenvalue 1 or -1".into()))
        }
    }
}

/// Block diagonal sum, which keeps the `(p_1, q_1, ...)` ordering of each summand.
pub fn direct_sum(parts: &[SympMatrix]) -> SympMatrix {
    let n: usize = parts.iter().map(|p| p.n).sum();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    let mut at = 0;
    for p in parts {
        m.view_mut((at, at), (2 * p.n, 2 * p.n)).copy_from(&p.m);
        at += 2 * p.n;
    }
    SympMatrix { n, m, tol: parts.first().map_or_else(Tolerances::default, |p| p.tol) }
}

pub fn block_diag(parts: &[DMatrix<f64>]) -> DMatrix<f64> {
    let size: usize = parts.iter().map(DMatrix::nrows).sum();
    let mut m = DMatrix::zeros(size, size);
    let mut at = 0;
    for p in parts {
        m.view_mut((at, at), (p.nrows(), p.nrows())).copy_from(p);
        at += p.nrows();
    }
    m
}

fn has_eigenvalue_near(m: &DMatrix<f64>, targets: &[f64], tol: f64) -> bool {
    eigenvalues(m).iter().any(|l| targets.iter().any(|&t| (l - Complex::new(t, 0.0)).norm() <= tol))
}

/// `A = (B + I)(B - I)^{-1}`.
pub fn cayley(b: &DMatrix<f64>, tol: Tolerances) -> Result<SympMatrix> {
    let n2 = b.nrows();
    let jb = j0(n2 / 2) * b;
    if max_abs(&(&jb - jb.transpose())) > tol.sp * (1.0 + max_abs(b)) {
        return Err(Error::Precondition("J0 B is not symmetric, so B is not Hamiltonian".into()));
    }
    if has_eigenvalue_near(b, &[0.0, 1.0, -1.0], tol.eig) {
        return Err(Error::Precondition("B has an eigenvalue at 0, 1 or -1".into()));
    }
    let i = DMatrix::identity(n2, n2);
    let inv = (b - &i).try_inverse().ok_or_else(|| Error::IllConditioned("B - I is singular".into()))?;
    let a = (b + &i) * inv;
    SympMatrix::new(a, tol)
}

/// `B = (A + I)(A - I)^{-1}`, the inverse of [`cayley`].
pub fn cayley_inv(a: &SympMatrix) -> Result<DMatrix<f64>> {
    a.require_star_star()?;
    let n2 = 2 * a.n;
    let i = DMatrix::identity(n2, n2);
    let inv = (&a.m - &i).try_inverse().ok_or_else(|| Error::IllConditioned("A - I is singular".into()))?;
    Ok((&a.m + &i) * inv)
}

/// A random symmetric matrix with entries in `[-scale, scale]`.
pub fn random_symmetric<R: Rng>(rng: &mut R, size: usize, scale: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(size, size);
    for r in 0..size {
        for c in r..size {
            let v = rng.random_range(-scale..=scale);
            s[(r, c)] = v;
            s[(c, r)] = v;
        }
    }
    s
}

/// A random symplectic matrix `exp(B)` with `B` Hamiltonian of size `scale`.
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    hamiltonian_of(&random_symmetric(rng, 2 * n, scale)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_factor_with_repeated_singular_values() {
        let (a1, a2) = (-0.23161518159747674, 0.1731314626691819);
        let r2 = a1 * a1 + a2 * a2;
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            a1, 0.0, -a2, 0.0,
            0.0, a1 / r2, 0.0, -a2 / r2,
            a2, 0.0, a1, 0.0,
            0.0, a2 / r2, 0.0, a1 / r2,
        ]);
        let u = orthogonal_factor(&m);
        let r = r2.sqrt();
        assert!((u.transpose() * &u - DMatrix::identity(4, 4)).amax() < 1e-12);
        assert!((u[(0, 0)] - a1 / r).abs() < 1e-12 && (u[(2, 0)] - a2 / r).abs() < 1e-12);
        assert!(u[(1, 0)].abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let id = SympMatrix::identity(1);
        assert_eq!(id.membership(), Membership { sp: true, sp_star: false, sp_star_star: false });
        let d = SympMatrix::with_default_tol(DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0])).unwrap();
        assert!(d.membership().sp_star_star);
        let rot = SympMatrix::with_default_tol(DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0])).unwrap();
        let m = rot.membership();
        assert!(m.sp_star && !m.sp_star_star);
        assert!(SympMatrix::with_default_tol(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0])).is_err());
    }

    #[test]
    fn cayley_of_diag() {
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -2.0]);
        let a = cayley(&b, Tolerances::default()).unwrap();
        assert!((a.m[(0, 0)] - 3.0).abs() < 1e-12);
        assert!((a.m[(1, 1)] - 1.0 / 3.0).abs() < 1e-12);
        let back = cayley_inv(&a).unwrap();
        assert!(max_abs(&(back - b)) < 1e-9);
    }

    #[test]
    fn cayley_rejects_eigenvalue_one() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(cayley(&b, Tolerances::default()).is_err());
    }

    #[test]
    fn hamiltonian_of_positive_form_rotates_anticlockwise() {
        let b = hamiltonian_of(&DMatrix::identity(2, 2));
        let a = (b * 0.1).exp();
        assert!(a[(1, 0)] > 0.0 && a[(0, 1)] < 0.0);
        assert!(symplectic_residual(&a) < 1e-12);
    }
}
