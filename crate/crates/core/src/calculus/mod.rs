//! Exterior and Lie calculus on one coordinate chart. Tensors are stored by
//! their components in the coordinate frame.
//!
//! Conventions: forms evaluate by the determinant rule, interior products
//! contract the first slot, `♯_π α = i(α)π` and `♭_σ X = i(X)σ`.

mod chart;
mod multi;
mod tensor;
mod vector;

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::RingError;
use crate::Rf;

pub use chart::Chart;
pub use multi::{increasing_tuples, sort_indices, FrameToken, KForm, KVector, Lower, Multi, Upper};
pub use tensor::OneOneTensor;
pub use vector::VectorField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("chart mismatch: `{left}` vs `{right}`")]
    ChartMismatch { left: String, right: String },
    #[error("a chart needs at least one coordinate")]
    EmptyChart,
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("contraction of a degree-0 element")]
    DegreeZero,
    #[error("expected degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn expect_degree(found: usize, expected: usize) -> Result<(), CalculusError> {
    if found == expected {
        Ok(())
    } else {
        Err(CalculusError::DegreeMismatch { expected, found })
    }
}

/// Lie bracket of vector fields.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, CalculusError> {
    x.chart().ensure_same(y.chart())?;
    Ok(x.bracket(y))
}

pub fn exterior_derivative(omega: &KForm) -> KForm {
    omega.d()
}

/// `i(X)ω` contracting the first slot.
pub fn interior_product(x: &VectorField, omega: &KForm) -> Result<KForm, CalculusError> {
    x.chart().ensure_same(omega.chart())?;
    if omega.degree() == 0 {
        return Err(CalculusError::DegreeZero);
    }
    Ok(omega.interior(x))
}

/// `i(α)P` with `i(α)(U∧V) = α(U)V − α(V)U`.
pub fn interior_product_form(alpha: &KForm, p: &KVector) -> Result<KVector, CalculusError> {
    alpha.chart().ensure_same(p.chart())?;
    expect_degree(alpha.degree(), 1)?;
    if p.degree() == 0 {
        return Err(CalculusError::DegreeZero);
    }
    Ok(p.interior(alpha))
}

pub fn lie_derivative_form(x: &VectorField, omega: &KForm) -> Result<KForm, CalculusError> {
    x.chart().ensure_same(omega.chart())?;
    Ok(omega.lie(x))
}

pub fn lie_derivative_multivector(x: &VectorField, p: &KVector) -> Result<KVector, CalculusError> {
    x.chart().ensure_same(p.chart())?;
    Ok(p.lie(x))
}

pub fn lie_derivative_tensor(
    x: &VectorField,
    a: &OneOneTensor,
) -> Result<OneOneTensor, CalculusError> {
    x.chart().ensure_same(a.chart())?;
    Ok(a.lie(x))
}

pub fn schouten_nijenhuis(p: &KVector, q: &KVector) -> Result<KVector, CalculusError> {
    p.chart().ensure_same(q.chart())?;
    Ok(p.schouten(q))
}

pub fn nijenhuis_tensor(a: &OneOneTensor) -> Vec<((usize, usize), VectorField)> {
    a.nijenhuis_table()
}

/// `♯_π α = i(α)π`; components `(♯_π α)^j = Σ_i α_i π^{ij}`.
pub fn sharp(pi: &KVector, alpha: &KForm) -> VectorField {
    assert_eq!(pi.degree(), 2, "sharp needs a bivector");
    pi.interior(alpha).to_vector()
}

/// `♭_σ X = i(X)σ`; components `(♭_σ X)_j = Σ_i X^i σ_{ij}`.
pub fn flat(sigma: &KForm, x: &VectorField) -> KForm {
    assert_eq!(sigma.degree(), 2, "flat needs a 2-form");
    sigma.interior(x)
}

/// `{f,g}_π = π(df, dg)`.
pub fn poisson_bracket(pi: &KVector, f: &Rf, g: &Rf) -> Rf {
    let c = pi.chart();
    pi.eval(&[&KForm::differential(c, f), &KForm::differential(c, g)])
}

/// `{α,β}_π = L_{♯πα}β − L_{♯πβ}α − d(π(α,β))`.
pub fn one_form_bracket(pi: &KVector, alpha: &KForm, beta: &KForm) -> KForm {
    let a = sharp(pi, alpha);
    let b = sharp(pi, beta);
    let pab = KForm::function(pi.chart(), pi.eval(&[alpha, beta]));
    beta.lie(&a).sub(&alpha.lie(&b)).sub(&pab.d())
}

/// Lichnerowicz differential `P ↦ −[π, P]`.
pub fn lichnerowicz(pi: &KVector, p: &KVector) -> KVector {
    pi.schouten(p).neg()
}

/// Write `c_1*b_1 + c_2*b_2 + …` with parenthesized compound coefficients.
pub(crate) fn fmt_sum<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Rf, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, basis) in terms {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = match c.as_constant() {
            Some(q) if q < Zero::zero() => (true, -c),
            _ => (false, c.clone()),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let text = mag.to_string();
        let simple = mag.is_polynomial() && mag.numerator().num_terms() == 1;
        match (basis.is_empty(), mag.is_one()) {
            (true, _) => write!(f, "{}", if simple { text } else { format!("({text})") })?,
            (false, true) => write!(f, "{basis}")?,
            (false, false) if simple => write!(f, "{text}*{basis}")?,
            (false, false) => write!(f, "({text})*{basis}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
