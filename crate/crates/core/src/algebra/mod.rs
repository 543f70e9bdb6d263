//! Exact algebra: scalars, multivariate polynomials, rational functions with
//! linear-form denominators, and exact linear algebra. Everything here is
//! generic over a [`Scalar`] field.

pub mod linear_form;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rational_function;
pub mod scalar;
pub mod univariate;

pub use linear_form::LinearForm;
pub use matrix::{poly_det, Echelon, Matrix};
pub use parse::parse_poly;
pub use poly::{monomials_of_degree, variable_names, Monomial, MultiPoly};
pub use rational_function::FactoredRationalFunction;
pub use scalar::Scalar;
pub use univariate::UniPoly;
