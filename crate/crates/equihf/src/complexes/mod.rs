//! Finite graded complexes, chain maps, cohomology and spectral sequences.

pub mod complex;
pub mod spectral;

pub use complex::{
    cohomology_by_degree, module_cohomology, poly_cohomology, quasi_iso_check, quasi_iso_local, tensor_square_swap, total_cohomology,
    ChainMap, CheckReport, Complex, EntryViolation, Generator, Grading, ModuleCohomology, QuasiIsoReport, Scalar,
};
pub use spectral::{spectral_sequence, Direction, Filtration, Page, SpectralSequence};
