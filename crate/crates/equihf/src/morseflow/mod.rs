//! Combinatorics of broken gradient trajectories of the standard Morse
//! function on `S^∞`: strata of the compactified spaces `Q̄^{i,σ}`
//! (unparametrized) and `P̄^{i,σ}` (parametrized), their boundary faces, and
//! the term each codimension one face contributes to the pants relations.

mod faces;
mod flow;
mod strata;

pub use faces::{codim1_faces, relation_rhs, relation_string, Face, FaceTerm};
pub use flow::{chart_inverse, flow_chart, FlowPoint};
pub use strata::{corner_count, corner_label, enumerate_strata, Factor, Sign, Space, Stratum};
