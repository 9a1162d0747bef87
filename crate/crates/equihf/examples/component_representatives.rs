//! Each component of the nondegenerate symplectic matrices in dimension 2n
//! is labelled by a sign and a Krein index. This walks the admissible labels
//! for small n and checks that the chosen representative lands back on its
//! label.

use equihf::symplinalg::{component_invariant, is_admissible, representative_for};

fn main() {
    for n in 1..=3usize {
        let bound = n as i64 + 1;
        let mut realized = 0;
        for sign in [1i8, -1] {
            for k in -bound..=bound {
                if !is_admissible(sign, k, n) {
                    assert!(representative_for(sign, k, n).is_err());
                    continue;
                }
                let a = representative_for(sign, k, n).expect("admissible label");
                let inv = component_invariant(&a).expect("nondegenerate");
                assert_eq!((inv.sign, inv.kappa), (sign, k));
                realized += 1;
            }
        }
        println!("n = {n}: {realized} components");
    }
}
