use std::fmt;

use num_traits::Zero;

use crate::calculus::{CalculusError, Chart, KForm, VectorField};
use crate::{Rational, Rf};

/// A section `(X, α)` of `TM ⊕ T*M`.
#[derive(Clone, PartialEq)]
pub struct BigSection {
    pub vector: VectorField,
    pub covector: KForm,
}

impl BigSection {
    pub fn new(vector: VectorField, covector: KForm) -> Self {
        assert!(vector.chart().same(covector.chart()), "chart mismatch");
        assert_eq!(covector.degree(), 1, "covector part must be a 1-form");
        BigSection { vector, covector }
    }

    pub fn zero(chart: &Chart) -> Self {
        Self::new(VectorField::zero(chart), KForm::zero(chart, 1))
    }

    pub fn tangent(x: VectorField) -> Self {
        let c = x.chart().clone();
        Self::new(x, KForm::zero(&c, 1))
    }

    pub fn cotangent(alpha: KForm) -> Self {
        let c = alpha.chart().clone();
        Self::new(VectorField::zero(&c), alpha)
    }

    /// `(∂_0,0), …, (∂_{n−1},0), (0,dx^0), …, (0,dx^{n−1})`.
    pub fn frame(chart: &Chart) -> Vec<Self> {
        let n = chart.dim();
        let mut out: Vec<Self> = (0..n)
            .map(|i| Self::tangent(VectorField::coordinate(chart, i)))
            .collect();
        out.extend((0..n).map(|i| Self::cotangent(KForm::basis(chart, &[i]))));
        out
    }

    /// Frame label such as `xv` or `dx`.
    pub fn frame_label(chart: &Chart, k: usize) -> String {
        let n = chart.dim();
        if k < n {
            format!("{}v", chart.coord(k))
        } else {
            format!("d{}", chart.coord(k - n))
        }
    }

    pub fn chart(&self) -> &Chart {
        self.vector.chart()
    }

    /// Components `(X^0, …, X^{n−1}, α_0, …, α_{n−1})`.
    pub fn comps(&self) -> Vec<Rf> {
        let mut v = self.vector.comps().to_vec();
        v.extend(self.covector.covector_comps());
        v
    }

    pub fn from_comps(chart: &Chart, comps: &[Rf]) -> Self {
        let n = chart.dim();
        assert_eq!(comps.len(), 2 * n);
        Self::new(
            VectorField::new(chart, comps[..n].to_vec()),
            KForm::covector(chart, &comps[n..]),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.covector.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.vector.add(&o.vector), self.covector.add(&o.covector))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.vector.sub(&o.vector), self.covector.sub(&o.covector))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.vector.neg(), self.covector.neg())
    }

    pub fn scale(&self, f: &Rf) -> Self {
        Self::new(self.vector.scale(f), self.covector.scale(f))
    }

    pub fn eval_at(&self, point: &[Rational]) -> Result<Vec<Rational>, CalculusError> {
        self.comps()
            .iter()
            .map(|c| c.eval(point).map_err(CalculusError::from))
            .collect()
    }

    /// `α(Y)` for the covector part of `self` and vector part of `other`.
    pub(crate) fn cross(&self, other: &Self) -> Rf {
        let a = self.covector.covector_comps();
        let mut acc = Rf::zero();
        for (ai, yi) in a.iter().zip(other.vector.comps()) {
            if !ai.is_zero() && !yi.is_zero() {
                acc = &acc + &(ai * yi);
            }
        }
        acc
    }
}

impl fmt::Display for BigSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vector, self.covector)
    }
}

impl fmt::Debug for BigSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
