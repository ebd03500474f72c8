//! The big tangent bundle `TM ⊕ T*M`: pairings, Courant brackets, the
//! Courant–Nijenhuis torsion and almost-Dirac spans.

mod endo;
mod section;
mod span;

use num_traits::Zero;
use thiserror::Error;

use crate::calculus::{one_form_bracket, sharp, CalculusError, KForm, KVector};
use crate::{Rational, Rf};

pub use endo::{
    courant_nijenhuis_torsion, torsion_frame_report, BigEndo, TorsionEntry, TorsionReport,
};
pub use section::BigSection;
pub use span::{
    presymplectic_data, ClosureReport, IsotropyReport, MembershipMode, PresymplecticData,
    SectionSpan,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CourantError {
    #[error("the twisting 3-form is not closed")]
    TwistNotClosed,
    #[error("expected a {expected}-form, found degree {found}")]
    TwistDegree { expected: usize, found: usize },
    #[error("span rank {found} at sample point {point} contradicts declared rank {declared}")]
    RankDeficiency {
        point: usize,
        declared: usize,
        found: usize,
    },
    #[error("no non-singular sample point available")]
    NoSamplePoints,
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// A closed 3-form used to twist the Courant bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist(KForm);

impl Twist {
    pub fn new(lambda: KForm) -> Result<Self, CourantError> {
        if lambda.degree() != 3 {
            return Err(CourantError::TwistDegree {
                expected: 3,
                found: lambda.degree(),
            });
        }
        if !lambda.d().is_zero() {
            return Err(CourantError::TwistNotClosed);
        }
        Ok(Twist(lambda))
    }

    pub fn form(&self) -> &KForm {
        &self.0
    }
}

fn half() -> Rf {
    Rf::constant(Rational::new(1.into(), 2.into()))
}

/// `g = ½(α(Y) + β(X))`.
pub fn neutral_pairing(s1: &BigSection, s2: &BigSection) -> Result<Rf, CourantError> {
    s1.chart().ensure_same(s2.chart())?;
    Ok(&half() * &(&s1.cross(s2) + &s2.cross(s1)))
}

/// `ω = ½(α(Y) − β(X))`.
pub fn omega_pairing(s1: &BigSection, s2: &BigSection) -> Result<Rf, CourantError> {
    s1.chart().ensure_same(s2.chart())?;
    Ok(&half() * &(&s1.cross(s2) - &s2.cross(s1)))
}

/// Courant bracket, optionally twisted by a closed 3-form:
/// `([X,Y], L_Xβ − L_Yα + ½d(α(Y) − β(X)) − i(Y)i(X)Λ)`.
pub fn bracket(s1: &BigSection, s2: &BigSection, twist: Option<&Twist>) -> BigSection {
    let c = s1.chart();
    let (x, a) = (&s1.vector, &s1.covector);
    let (y, b) = (&s2.vector, &s2.covector);
    let f = &s1.cross(s2) - &s2.cross(s1);
    let mut cov = b.lie(x).sub(&a.lie(y));
    if !f.is_zero() {
        cov = cov.add(&KForm::differential(c, &f).scale(&half()));
    }
    if let Some(t) = twist {
        cov = cov.sub(&t.form().interior(x).interior(y));
    }
    BigSection::new(x.bracket(y), cov)
}

pub fn courant_bracket(s1: &BigSection, s2: &BigSection) -> Result<BigSection, CourantError> {
    s1.chart().ensure_same(s2.chart())?;
    Ok(bracket(s1, s2, None))
}

pub fn twisted_courant_bracket(
    s1: &BigSection,
    s2: &BigSection,
    lambda: &KForm,
) -> Result<BigSection, CourantError> {
    s1.chart().ensure_same(s2.chart())?;
    s1.chart().ensure_same(lambda.chart())?;
    let t = Twist::new(lambda.clone())?;
    Ok(bracket(s1, s2, Some(&t)))
}

/// Bracket of the Courant algebroid with anchor `Id + ♯π`:
/// vector part `[X,Y] + i(β)L_Xπ − i(α)L_Yπ − ½♯π d(α(Y) − β(X))`,
/// covector part `{α,β}_π + L_Xβ − L_Yα + ½d(α(Y) − β(X))`.
pub fn pi_algebroid_bracket(
    pi: &KVector,
    s1: &BigSection,
    s2: &BigSection,
) -> Result<BigSection, CourantError> {
    s1.chart().ensure_same(s2.chart())?;
    s1.chart().ensure_same(pi.chart())?;
    let c = s1.chart();
    let (x, a) = (&s1.vector, &s1.covector);
    let (y, b) = (&s2.vector, &s2.covector);
    let df = KForm::differential(c, &(&s1.cross(s2) - &s2.cross(s1))).scale(&half());
    let vec = x
        .bracket(y)
        .add(&pi.lie(x).interior(b).to_vector())
        .sub(&pi.lie(y).interior(a).to_vector())
        .sub(&sharp(pi, &df));
    let cov = one_form_bracket(pi, a, b)
        .add(&b.lie(x))
        .sub(&a.lie(y))
        .add(&df);
    Ok(BigSection::new(vec, cov))
}

/// `(X, α) ↦ (X + ♯π α, α)`.
pub fn pi_iso(pi: &KVector, s: &BigSection) -> Result<BigSection, CourantError> {
    s.chart().ensure_same(pi.chart())?;
    Ok(BigSection::new(
        s.vector.add(&sharp(pi, &s.covector)),
        s.covector.clone(),
    ))
}

#[cfg(test)]
mod tests;
