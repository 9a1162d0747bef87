use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::blocks::{build_blocks, lift_of_blocks, BlockSpec};
use super::krein::krein_index;
use super::matrix::{hamiltonian_of, morse_index, random_symmetric, SympMatrix, Tolerances};
use super::path::{CzEvaluator, PathExpr};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CzKreinReport {
    pub n: usize,
    pub kappa: i64,
    pub mu: i64,
    pub mu_square: i64,
    /// `κ(A) - n`.
    pub lhs: i64,
    /// `μ(Ã²) - 2 μ(Ã)`.
    pub rhs: i64,
    pub holds: bool,
    pub kappa_parity: bool,
    pub mu_parity: bool,
}

/// Checks `κ(A) - n = μ(Ã²) - 2μ(Ã)` for the direct sum of `blocks`, using
/// `lift` or the default lift of each block.
pub fn verify_cz_krein(blocks: &[BlockSpec], lift: Option<PathExpr>, tol: Tolerances) -> Result<CzKreinReport> {
    let a = build_blocks(blocks, tol)?;
    let lift = lift.unwrap_or_else(|| lift_of_blocks(blocks));
    let eval = CzEvaluator { tol };
    let kappa = krein_index(&a)?.kappa;
    let mu = eval.conley_zehnder(&lift)?;
    let mu_square = eval.conley_zehnder(&PathExpr::square(lift))?;
    let n = a.n as i64;
    let sign = |x: f64| if x > 0.0 { 1 } else { -1 };
    let pow = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(CzKreinReport {
        n: a.n,
        kappa,
        mu,
        mu_square,
        lhs: kappa - n,
        rhs: mu_square - 2 * mu,
        holds: kappa - n == mu_square - 2 * mu,
        kappa_parity: pow(kappa) == pow(n) * sign(a.det_i_minus_sq()),
        mu_parity: pow(mu) == sign(a.det_i_minus()),
    })
}

/// `κ(A)` is unchanged by `A -> A exp(ε B)` for random Hamiltonian `B` of size `eps`.
pub fn local_constancy_holds<R: Rng>(rng: &mut R, a: &SympMatrix, eps: f64) -> Result<bool> {
    let k = krein_index(a)?.kappa;
    let b = hamiltonian_of(&random_symmetric(rng, 2 * a.n, 1.0));
    let b = &b * (eps / b.amax().max(f64::MIN_POSITIVE));
    let moved = SympMatrix::new(&a.m * b.exp(), a.tol)?;
    Ok(krein_index(&moved)?.kappa == k)
}

/// `κ(exp(tB)) = n - i(Q)` for a nondegenerate quadratic form and small `t`.
pub fn epsilon_path_holds(s: &DMatrix<f64>, t: f64, tol: Tolerances) -> Result<Option<bool>> {
    let Some(index) = morse_index(s) else { return Ok(None) };
    let a = SympMatrix::new((hamiltonian_of(s) * t).exp(), tol)?;
    Ok(Some(krein_index(&a)?.kappa == (a.n as i64) - index as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplinalg::blocks::{parse_blocks, random_blocks};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_blocks() {
        let r = verify_cz_krein(&parse_blocks("i-:a=-0.5").unwrap(), None, Tolerances::default()).unwrap();
        assert_eq!((r.lhs, r.mu, r.mu_square, r.rhs), (-1, 0, -1, -1));
        let r = verify_cz_krein(&parse_blocks("ii+:theta=1").unwrap(), None, Tolerances::default()).unwrap();
        assert_eq!((r.lhs, r.mu, r.mu_square), (0, 0, 0));
        for spec in ["i+:a=0.3", "ii-:theta=-2", "iii:a1=0.2,a2=0.5", "iii:a1=-0.5,a2=0"] {
            let r = verify_cz_krein(&parse_blocks(spec).unwrap(), None, Tolerances::default()).unwrap();
            assert!(r.holds && r.kappa_parity && r.mu_parity, "{spec}: {r:?}");
        }
    }

    #[test]
    fn random_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            for _ in 0..15 {
                let blocks = random_blocks(&mut rng, n);
                let r = verify_cz_krein(&blocks, None, Tolerances::default()).unwrap();
                assert!(r.holds && r.kappa_parity && r.mu_parity, "{blocks:?}: {r:?}");
            }
        }
    }

    #[test]
    fn epsilon_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            let s = random_symmetric(&mut rng, 2 * n, 1.0);
            assert_ne!(epsilon_path_holds(&s, 0.01, Tolerances::default()).unwrap(), Some(false));
        }
    }
}
