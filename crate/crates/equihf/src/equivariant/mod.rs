//! Z/2-equivariant algebra of a complex with an involution: the Borel
//! complex `d_V + h(id + iota)`, group and Tate cohomology, the sequence in
//! `h`, the Smith inequality, and the squaring map into the swap square.

pub mod involutive;
pub mod random;
pub mod squaring;

pub use involutive::{
    borel_complex, borel_truncated, group_cohomology, les_exactness, module_invariants, smith_bound_check, tate_dimension, truncate_map,
    truncation_agrees, verify_u_sequence, EqModuleInvariants, InvolutiveComplex, LesReport, PositionReport, SmithBoundReport,
    USequenceReport,
};
pub use squaring::{
    kaledin_check, squaring_additivity_holds, squaring_map, squaring_well_defined, swap_square, KaledinReport, WellDefinedReport,
};
