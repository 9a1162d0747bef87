//! Linear symplectic geometry: membership in `Sp`, `Sp*` and `Sp**`, the
//! Cayley transform, the Krein index, block normal forms with the component
//! classification of `Sp**`, and Conley–Zehnder indices of symbolic paths.
//!
//! Coordinates are ordered `(p_1, q_1, ..., p_n, q_n)` throughout.

pub mod blocks;
pub mod krein;
pub mod matrix;
pub mod path;
pub mod verify;

pub use blocks::{
    build_blocks, component_invariant, is_admissible, lift_of_blocks, parse_blocks, random_blocks, representative_blocks,
    representative_for, BlockKind, BlockSpec, ComponentInvariant,
};
pub use krein::{krein_index, EigenCluster, KreinResult};
pub use matrix::{cayley, cayley_inv, direct_sum, hamiltonian_of, j0, morse_index, Membership, SympMatrix, Tolerances};
pub use path::{conley_zehnder, parse_path, parse_quadratic, polar_winding, winding_difference, CzEvaluator, PathExpr};
pub use verify::{epsilon_path_holds, local_constancy_holds, verify_cz_krein, CzKreinReport};
