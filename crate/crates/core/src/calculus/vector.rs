use std::fmt;

use num_traits::Zero;

use crate::{Rational, Rf};

use super::{fmt_sum, CalculusError, Chart};

/// Components of a vector field in the coordinate frame.
#[derive(Clone, PartialEq)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<Rf>,
}

impl VectorField {
    pub fn new(chart: &Chart, comps: Vec<Rf>) -> Self {
        assert_eq!(comps.len(), chart.dim(), "vector component count");
        VectorField {
            chart: chart.clone(),
            comps,
        }
    }

    pub fn zero(chart: &Chart) -> Self {
        Self::new(chart, vec![Rf::zero(); chart.dim()])
    }

    /// The frame field `∂/∂x^i`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.comps[i] = Rf::from_int(1);
        v
    }

    pub fn frame(chart: &Chart) -> Vec<Self> {
        (0..chart.dim())
            .map(|i| Self::coordinate(chart, i))
            .collect()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn comps(&self) -> &[Rf] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<Rf> {
        self.comps
    }

    pub fn comp(&self, i: usize) -> &Rf {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Rf::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.chart.same(&other.chart), "chart mismatch");
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(&self.chart, comps)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.chart.same(&other.chart), "chart mismatch");
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(&self.chart, comps)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.chart, self.comps.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, f: &Rf) -> Self {
        Self::new(&self.chart, self.comps.iter().map(|a| a * f).collect())
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Rf) -> Rf {
        let mut acc = Rf::zero();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial(i);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// Lie bracket `[X,Y]^i = X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, other: &Self) -> Self {
        assert!(self.chart.same(&other.chart), "chart mismatch");
        let comps = (0..self.chart.dim())
            .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
            .collect();
        Self::new(&self.chart, comps)
    }

    pub fn eval_at(&self, point: &[Rational]) -> Result<Vec<Rational>, CalculusError> {
        self.comps
            .iter()
            .map(|c| c.eval(point).map_err(CalculusError::from))
            .collect()
    }

    pub fn map_comps(
        &self,
        chart: &Chart,
        f: impl Fn(&Rf) -> Result<Rf, CalculusError>,
    ) -> Result<Self, CalculusError> {
        Ok(Self::new(
            chart,
            self.comps.iter().map(f).collect::<Result<_, _>>()?,
        ))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .comps
            .iter()
            .enumerate()
            .map(|(i, c)| (c, format!("{}v", self.chart.coord(i))));
        fmt_sum(f, terms)
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
