//! Exact algebra for Z/2-equivariant Floer theory at desk scale.
//!
//! The crate works over GF(2) throughout. Polynomials in the equivariant
//! parameter `h` live in [`scalars::HPoly`], and inverting `h` is modelled by
//! the rational function field [`scalars::HRational`], which has the same
//! dimension theory as Laurent series.
//!
//! The modules build on one another:
//!
//! - [`scalars`]: GF(2), GF(2)[h], GF(2)(h), dense matrices, Smith forms.
//! - [`complexes`]: graded complexes, chain maps, filtrations and spectral sequences.
//! - [`equivariant`]: Borel complexes, group and Tate cohomology, Smith bounds, squaring.
//! - [`symplinalg`]: symplectic matrices, Krein and Conley-Zehnder indices.
//! - [`morseflow`]: strata and faces of the flow spaces on the infinite sphere.
//! - [`floermodel`]: the abstract Floer datum and its validation and localization checks.
//! - [`cli`]: file formats, reports and the command-line front end.

pub mod cli;
pub mod complexes;
pub mod equivariant;
pub mod error;
pub mod floermodel;
pub mod morseflow;
pub mod scalars;
pub mod symplinalg;

pub use error::{Error, ParseError};
