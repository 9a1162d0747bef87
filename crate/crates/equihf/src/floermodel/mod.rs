//! An abstract model of `Z/2`-equivariant Hamiltonian Floer theory.
//!
//! A [`FloerDatum`] records generators, actions and indices for `φ` and
//! `φ²`, the Floer differentials, the higher equivariant differentials
//! `d_eq^{i,±}` and the pants coefficients `p^{i,±}`. Everything else in
//! this module is computed from it.

pub mod analysis;
pub mod datum;
pub mod examples;
pub mod random;
pub mod solver;
pub mod transfer;
pub mod validate;

pub use analysis::{
    borel_tensor_complex, equivariant_complex, hf_eq_invariants, hf_poly_invariants, localized_check, pants_chain_map, smith_check,
    spectral_checks, LocalizedReport, PolyInvariants, SmithReport, SpectralReport,
};
pub use datum::{parse_datum, FixedPoint, FloerDatum, Mode, PeriodicPoint, SIGNS};
pub use examples::{annulus, clifford, morse_pair, single_point, twisted_pair, zero_diagonal, Builtin};
pub use random::{random_datum, RandomDatumSpec};
pub use solver::{solve_d_level, solve_pants, PantsTarget};
pub use transfer::{transfer, SideCondition, TransferReport};
pub use validate::{validate, Check, ValidationReport};
