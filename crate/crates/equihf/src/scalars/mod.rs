//! Exact scalars: GF(2), GF(2)[h], GF(2)(h), dense matrices over them and
//! Smith normal forms.

pub mod gf2;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod smith;

pub use gf2::{gf2_rank_kernel, BitMatrix, Gf2};
pub use linalg::{lift_gf2, poly_mod_h, poly_to_rational, Field, FieldCohomology, Mat, Ring, Subquotient};
pub use poly::{DivisionByZero, HPoly};
pub use rational::HRational;
pub use smith::{local_smith_agrees, smith_local, smith_pid, Certificate, LocalSmith, PidSmith, SmithOp};
