use std::fmt;
use std::sync::Arc;

use crate::ring::{vars_from, Vars};
use crate::{Rational, Rf};

use super::CalculusError;

/// A coordinate chart: an ordered list of distinct coordinate names.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

struct ChartData {
    name: String,
    vars: Vars,
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Self, CalculusError> {
        if coords.is_empty() {
            return Err(CalculusError::EmptyChart);
        }
        for (i, a) in coords.iter().enumerate() {
            if coords[..i].iter().any(|b| b.as_ref() == a.as_ref()) {
                return Err(CalculusError::DuplicateCoordinate(a.as_ref().to_string()));
            }
        }
        Ok(Chart(Arc::new(ChartData {
            name: name.to_string(),
            vars: vars_from(coords),
        })))
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of<S: AsRef<str>>(name: &str, coords: &[S]) -> Self {
        Self::new(name, coords).expect("valid chart")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.0.vars
    }

    pub fn coords(&self) -> &[String] {
        &self.0.vars
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.0.vars[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|c| c == name)
    }

    /// The coordinate function `x^i`.
    pub fn x(&self, i: usize) -> Rf {
        Rf::var(self.vars(), i)
    }

    pub fn x_named(&self, name: &str) -> Rf {
        self.x(self.index_of(name).expect("known coordinate"))
    }

    /// Same coordinate list (names of charts are labels only).
    pub fn same(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.vars[..] == other.0.vars[..]
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<(), CalculusError> {
        if self.same(other) {
            Ok(())
        } else {
            Err(CalculusError::ChartMismatch {
                left: self.name().to_string(),
                right: other.name().to_string(),
            })
        }
    }

    /// Chart on the listed coordinates of `self`, in the given order.
    pub fn sub_chart(&self, name: &str, keep: &[usize]) -> Chart {
        let names: Vec<&str> = keep.iter().map(|&i| self.coord(i)).collect();
        Chart::of(name, &names)
    }

    /// Re-express a function of this chart on `target`. Coordinates of
    /// `self` absent from `target` are set to zero.
    pub fn transfer(&self, f: &Rf, target: &Chart) -> Result<Rf, CalculusError> {
        let map: Vec<Option<usize>> = self.coords().iter().map(|c| target.index_of(c)).collect();
        f.reindex(&map, target.vars()).map_err(CalculusError::from)
    }

    /// Exact value of `f` at `point`.
    pub fn eval(&self, f: &Rf, point: &[Rational]) -> Result<Rational, CalculusError> {
        debug_assert_eq!(point.len(), self.dim());
        f.eval(point).map_err(CalculusError::from)
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.coords().join(","))
    }
}
