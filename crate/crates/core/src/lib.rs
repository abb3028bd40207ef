//! Certificates of nonnegativity for correlatively sparse polynomials.
//!
//! A polynomial (or symmetric polynomial matrix) is certified nonnegative by
//! exhibiting a Gram matrix in one of four nested cones:
//!
//! | cone  | Gram constraint                          | conic program |
//! |-------|------------------------------------------|---------------|
//! | DSOS  | diagonally dominant                      | LP            |
//! | SDSOS | scaled diagonally dominant               | SOCP          |
//! | SSOS  | sum of PSD blocks on the csp cliques     | SDP (small)   |
//! | SOS   | dense PSD                                | SDP           |
//!
//! Each cone compiles to a [`conic::ConicProgram`] that the embedded
//! interior-point solver handles directly.

pub mod chordal;
pub mod conic;
pub mod cones;
pub mod error;
pub mod polyalg;
pub mod problems;

pub use error::{Error, Result};
pub use polyalg::{monomial_basis, CspMatrix, Exponent, MonomialBasis, PolyMatrix, Polynomial};
