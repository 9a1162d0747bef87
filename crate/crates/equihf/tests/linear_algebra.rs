mod oracles;

use equihf::equivariant::random::{random_involutive, Family, RandomSpec};
use equihf::equivariant::{borel_truncated, group_cohomology, InvolutiveComplex};
use equihf::scalars::{BitMatrix, FieldCohomology, Gf2, HPoly, Mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..2, cols), rows)
}

fn to_mat(rows: &[Vec<u8>], cols: usize) -> Mat<Gf2> {
    Mat::from_fn(rows.len(), cols, |r, c| Gf2(rows[r][c] == 1))
}

fn to_bits(m: &Mat<Gf2>) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).0 as u8).collect()).collect()
}

proptest! {
    #[test]
    fn rank_matches_textbook_elimination((c, rows) in (1usize..9, 1usize..9).prop_flat_map(|(r, c)| (Just(c), bits(r, c)))) {
        let m = to_mat(&rows, c);
        let expected = oracles::rank_gf2(&rows);
        prop_assert_eq!(m.rank(), expected);
        prop_assert_eq!(BitMatrix::from_rows(&rows, c).rank(), expected);
        prop_assert_eq!(m.kernel().len(), oracles::kernel_dim_bruteforce(&rows, c));
    }

    #[test]
    fn polynomial_product_matches_schoolbook(a in prop::collection::vec(0u8..2, 0..12), b in prop::collection::vec(0u8..2, 0..12)) {
        let pa = HPoly::from_coeffs(&a.iter().map(|&x| x == 1).collect::<Vec<_>>());
        let pb = HPoly::from_coeffs(&b.iter().map(|&x| x == 1).collect::<Vec<_>>());
        let product = pa.mul(&pb);
        let expected = oracles::poly_mul(&a, &b);
        for (k, &bit) in expected.iter().enumerate() {
            prop_assert_eq!(product.coeff(k), bit == 1);
        }
        prop_assert!(product.degree().is_none_or(|d| d < expected.len().max(1)));
    }

    #[test]
    fn field_cohomology_of_squares(rows in bits(6, 6)) {
        // d = m^2 is not a differential in general; d = [[0, m], [0, 0]] always is.
        let m = to_mat(&rows, 6);
        let d = Mat::from_fn(12, 12, |r, c| if r < 6 && c >= 6 { *m.get(r, c - 6) } else { Gf2::ZERO });
        let expected = 12 - 2 * oracles::rank_gf2(&rows);
        prop_assert_eq!(FieldCohomology::of(&d).dim(), expected);
    }
}

fn involutive_bits(w: &InvolutiveComplex) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
    (to_bits(&w.complex.d), to_bits(&w.iota))
}

#[test]
fn group_cohomology_predicts_every_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for family in [Family::Any, Family::Acyclic, Family::LevelwiseFree] {
        for round in 0..40 {
            let spec = RandomSpec { max_dim: 8, family, general_involution: round % 2 == 0 };
            let w = random_involutive(&mut rng, &spec);
            let inv = group_cohomology(&w);
            let torsion: Vec<u32> = inv.torsion_exponents.iter().map(|&a| a as u32).collect();
            let (d, iota) = involutive_bits(&w);
            for n in 1..=6 {
                let oracle = oracles::borel_truncated_dim(&d, &iota, n);
                assert_eq!(oracles::predicted_truncated_dim(inv.free_rank, &torsion, n), oracle, "{family:?} round {round}, N = {n}");
                assert_eq!(FieldCohomology::of(&borel_truncated(&w, n).d).dim(), oracle);
            }
        }
    }
}

#[test]
fn truncated_rank_agrees_with_expanded_matrix() {
    // (1 + h) x -> y over F2[h]/h^3: rank 3 since 1 + h is a unit there.
    let m = vec![vec![vec![1, 1]]];
    assert_eq!(oracles::truncated_rank(&m, 1, 3), 3);
    let m = vec![vec![vec![0, 0, 1]]];
    assert_eq!(oracles::truncated_rank(&m, 1, 3), 1);
}
