//! Exact computations on Coxeter multiarrangements.
//!
//! The [`algebra`] layer is generic over the coefficient field; the
//! arrangement-level modules work over [`Rational`] through the aliases
//! below.

pub mod algebra;
pub mod arrangement;
pub mod error;
pub mod dermod;
pub mod lattice;
pub mod multichar;
pub mod primitive;
pub mod verify;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;
pub type Poly = algebra::MultiPoly<Rational>;
pub type RationalFunction = algebra::FactoredRationalFunction<Rational>;
pub type RatMatrix = algebra::Matrix<Rational>;
/// Integer polynomial in one variable; used for characteristic polynomials.
pub type IntPoly = algebra::UniPoly<Integer>;
