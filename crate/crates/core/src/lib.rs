//! Exact symbolic verification of generalized complex, paracomplex and
//! subtangent structures on coordinate charts.

#![allow(clippy::needless_range_loop)]

pub mod calculus;
pub mod courant;
pub mod gcps;
pub mod linalg;
pub mod reduction;
pub mod ring;
pub mod sample;
pub mod submanifold;

pub use calculus::{Chart, KForm, KVector, OneOneTensor, VectorField};
pub use linalg::Matrix;
pub use ring::{Field, GaussianRational, Polynomial, RationalFunction, RingError};

/// Exact rational scalars.
pub type Rational = num_rational::BigRational;
/// Polynomials with rational coefficients.
pub type Poly = Polynomial<Rational>;
/// Rational functions with rational coefficients; the coefficient ring of all tensors.
pub type Rf = RationalFunction<Rational>;
