//! Sparse multivariate polynomials, polynomial matrices, monomial bases and
//! correlative sparsity.

mod basis;
mod csp;
mod exponent;
mod json;
mod matrix;
mod polynomial;

pub use basis::{binomial, monomial_basis, MonomialBasis};
pub use csp::CspMatrix;
pub use exponent::Exponent;
pub use json::{PolyMatrixJson, PolynomialJson, TermJson};
pub use matrix::PolyMatrix;
pub use polynomial::{csp_matrix_of_set, Polynomial, ZERO_TOL};
