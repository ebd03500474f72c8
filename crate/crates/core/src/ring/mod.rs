//! Exact scalars: rationals, multivariate polynomials, rational functions and
//! the Gaussian rationals.

mod field;
mod gaussian;
mod poly;
mod ratfunc;

pub use field::Field;
pub use gaussian::GaussianRational;
pub use poly::{vars_from, Monomial, Polynomial, Vars};
pub use ratfunc::RationalFunction;

#[allow(unused_imports)]
pub(crate) use poly::same_vars;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("variable-list mismatch")]
    VariableMismatch,
    #[error("singular sample point; choose another")]
    SingularPoint,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
}

/// Parse a rational literal such as `3`, `-2/5`.
pub fn parse_rational(s: &str) -> Option<crate::Rational> {
    s.trim().parse().ok()
}
