//! Reduction of Poisson and generalized structures along coordinate-aligned
//! submanifolds with coordinate-projection foliations.

mod control;
mod reduce;

use thiserror::Error;

use crate::calculus::{CalculusError, Chart, Multi, VectorField};
use crate::gcps::GcpsError;
use crate::linalg::Matrix;
use crate::sample::{sample_points, DEFAULT_SAMPLE_COUNT, DEFAULT_SEED};
use crate::{Rational, Rf};

pub(crate) use control::bilinear;
pub use control::{
    control_bundle_check, controlled_extension, poisson_reduce, ControlReport, Extension,
};
pub use reduce::{
    enlarged_image, gcps_reduce, hitchin_reduce, pseudo_normal, reduce_via_enlarged,
    reduce_via_pseudonormal, translation_momentum_reduction, MomentumReport, ReductionResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Gcps(#[from] GcpsError),
    #[error("invalid definition: {0}")]
    Definition(String),
    #[error("hypothesis '{name}' fails: {witness}")]
    Hypothesis { name: &'static str, witness: String },
    #[error("rank of {what} is not constant across sample points: {ranks:?}")]
    RankInconsistent {
        what: &'static str,
        ranks: Vec<usize>,
    },
}

pub(crate) fn hypothesis(name: &'static str, witness: impl Into<String>) -> ReductionError {
    ReductionError::Hypothesis {
        name,
        witness: witness.into(),
    }
}

/// `N = {x^a = 0, a ∈ Z}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldSpec {
    chart: Chart,
    zero: Vec<usize>,
    tangent: Vec<usize>,
    induced: Chart,
    seed: u64,
}

impl SubmanifoldSpec {
    pub fn new<S: AsRef<str>>(
        chart: &Chart,
        zero_coordinates: &[S],
    ) -> Result<Self, ReductionError> {
        let mut zero = Vec::new();
        for z in zero_coordinates {
            let i = chart.index_of(z.as_ref()).ok_or_else(|| {
                ReductionError::Definition(format!("unknown coordinate {}", z.as_ref()))
            })?;
            if zero.contains(&i) {
                return Err(ReductionError::Definition(format!(
                    "coordinate {} listed twice",
                    z.as_ref()
                )));
            }
            zero.push(i);
        }
        zero.sort_unstable();
        if zero.len() == chart.dim() {
            return Err(ReductionError::Definition(
                "the zero set must leave at least one coordinate".into(),
            ));
        }
        let tangent: Vec<usize> = (0..chart.dim()).filter(|i| !zero.contains(i)).collect();
        let induced = chart.sub_chart(&format!("{}|N", chart.name()), &tangent);
        Ok(SubmanifoldSpec {
            chart: chart.clone(),
            zero,
            tangent,
            induced,
            seed: DEFAULT_SEED,
        })
    }

    pub fn whole(chart: &Chart) -> Self {
        Self::new::<&str>(chart, &[]).expect("empty zero set")
    }

    /// Seed of the sample points certifying rank conditions.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Chart of `N` on the surviving coordinates.
    pub fn induced_chart(&self) -> &Chart {
        &self.induced
    }

    /// Ambient indices of the zeroed coordinates.
    pub fn zero_indices(&self) -> &[usize] {
        &self.zero
    }

    /// Ambient indices of the coordinates of `N`.
    pub fn tangent_indices(&self) -> &[usize] {
        &self.tangent
    }

    pub fn dim(&self) -> usize {
        self.tangent.len()
    }

    pub fn restrict(&self, f: &Rf) -> Result<Rf, CalculusError> {
        self.chart.transfer(f, &self.induced)
    }

    /// Ambient components restricted to `N`.
    pub fn restrict_comps(&self, comps: &[Rf]) -> Result<Vec<Rf>, CalculusError> {
        comps.iter().map(|f| self.restrict(f)).collect()
    }

    pub fn restrict_vector(&self, x: &VectorField) -> Result<Vec<Rf>, CalculusError> {
        self.restrict_comps(x.comps())
    }

    pub fn restrict_matrix(&self, m: &Matrix<Rf>) -> Result<Matrix<Rf>, CalculusError> {
        m.try_map(|f| self.restrict(f))
    }

    /// `ι*ω` on the induced chart.
    pub fn pullback<K>(&self, w: &Multi<K>) -> Result<Multi<K>, CalculusError> {
        let map: Vec<Option<usize>> = (0..self.chart.dim())
            .map(|i| self.tangent.iter().position(|&t| t == i))
            .collect();
        w.reindex_frame(&self.induced, &map, |f| self.restrict(f))
    }

    /// Unit vector of the ambient frame along `N`.
    pub(crate) fn unit(&self, i: usize) -> Vec<Rf> {
        (0..self.chart.dim())
            .map(|j| {
                if j == i {
                    Rf::from_int(1)
                } else {
                    Rf::from_int(0)
                }
            })
            .collect()
    }

    /// Ambient point of `N` from induced coordinates.
    pub fn embed_point(&self, p: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::from_integer(0.into()); self.chart.dim()];
        for (k, &i) in self.tangent.iter().enumerate() {
            out[i] = p[k].clone();
        }
        out
    }

    /// Deterministic sample points of `N` in induced coordinates.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Vec<Rational>> {
        sample_points(seed, self.dim(), count)
    }

    pub(crate) fn default_sample(&self) -> Vec<Vec<Rational>> {
        self.sample(self.seed, DEFAULT_SAMPLE_COUNT)
    }
}

/// Fibers of the projection of `N` forgetting the listed coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FoliationSpec {
    sub: SubmanifoldSpec,
    fiber: Vec<usize>,
    quotient_idx: Vec<usize>,
    quotient: Chart,
}

impl FoliationSpec {
    pub fn new<S: AsRef<str>>(
        sub: &SubmanifoldSpec,
        fiber_coordinates: &[S],
    ) -> Result<Self, ReductionError> {
        let mut fiber = Vec::new();
        for f in fiber_coordinates {
            let i = sub.chart.index_of(f.as_ref()).ok_or_else(|| {
                ReductionError::Definition(format!("unknown coordinate {}", f.as_ref()))
            })?;
            if sub.zero.contains(&i) {
                return Err(ReductionError::Definition(format!(
                    "fiber coordinate {} is zeroed on N",
                    f.as_ref()
                )));
            }
            if !fiber.contains(&i) {
                fiber.push(i);
            }
        }
        fiber.sort_unstable();
        let quotient_idx: Vec<usize> = sub
            .tangent
            .iter()
            .copied()
            .filter(|i| !fiber.contains(i))
            .collect();
        if quotient_idx.is_empty() {
            return Err(ReductionError::Definition(
                "the quotient must keep at least one coordinate".into(),
            ));
        }
        let quotient = sub
            .chart
            .sub_chart(&format!("{}/F", sub.chart.name()), &quotient_idx);
        Ok(FoliationSpec {
            sub: sub.clone(),
            fiber,
            quotient_idx,
            quotient,
        })
    }

    pub fn trivial(sub: &SubmanifoldSpec) -> Self {
        Self::new::<&str>(sub, &[]).expect("trivial foliation")
    }

    pub fn submanifold(&self) -> &SubmanifoldSpec {
        &self.sub
    }

    /// Ambient indices of the fiber coordinates.
    pub fn fiber_indices(&self) -> &[usize] {
        &self.fiber
    }

    /// Ambient indices of the quotient coordinates.
    pub fn quotient_indices(&self) -> &[usize] {
        &self.quotient_idx
    }

    pub fn quotient_chart(&self) -> &Chart {
        &self.quotient
    }

    /// `f` on `N` as a function on `Q`; fails unless `f` is constant
    /// along the fibers.
    pub fn descend(&self, f: &Rf) -> Result<Rf, ReductionError> {
        let n = self.sub.induced_chart();
        for &a in &self.fiber {
            let k = self
                .sub
                .tangent
                .iter()
                .position(|&t| t == a)
                .expect("fiber lies in N");
            if !num_traits::Zero::is_zero(&f.partial(k)) {
                return Err(hypothesis(
                    "projectability",
                    format!("{f} depends on {}", n.coord(k)),
                ));
            }
        }
        Ok(n.transfer(f, &self.quotient)?)
    }
}

/// A span of vector fields along `N`, given by ambient formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlBundle {
    sub: SubmanifoldSpec,
    generators: Vec<VectorField>,
}

impl ControlBundle {
    pub fn new(
        sub: &SubmanifoldSpec,
        generators: Vec<VectorField>,
    ) -> Result<Self, ReductionError> {
        for g in &generators {
            sub.chart.ensure_same(g.chart())?;
        }
        Ok(ControlBundle {
            sub: sub.clone(),
            generators,
        })
    }

    pub fn zero(sub: &SubmanifoldSpec) -> Self {
        ControlBundle {
            sub: sub.clone(),
            generators: Vec::new(),
        }
    }

    pub fn submanifold(&self) -> &SubmanifoldSpec {
        &self.sub
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    /// Generators restricted to `N`.
    pub fn restricted(&self) -> Result<Vec<Vec<Rf>>, CalculusError> {
        self.generators
            .iter()
            .map(|g| self.sub.restrict_vector(g))
            .collect()
    }

    /// Generic rank over the functions on `N`.
    pub fn rank(&self) -> Result<usize, CalculusError> {
        Ok(crate::linalg::span_rank(
            &self.restricted()?,
            self.sub.chart.dim(),
        ))
    }

    /// Rank at each sample point of `N`; a point where some component is
    /// singular is skipped.
    pub fn ranks_at(&self, points: &[Vec<Rational>]) -> Result<Vec<usize>, CalculusError> {
        let r = self.restricted()?;
        let mut out = Vec::new();
        for p in points {
            let vals: Result<Vec<Vec<Rational>>, _> = r
                .iter()
                .map(|v| v.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>, _>>())
                .collect();
            if let Ok(vals) = vals {
                out.push(crate::linalg::span_rank(&vals, self.sub.chart.dim()));
            }
        }
        Ok(out)
    }

    /// A basis of `ann E` along `N`, as ambient covector components.
    pub fn annihilator(&self) -> Result<Vec<Vec<Rf>>, CalculusError> {
        let r = self.restricted()?;
        let n = self.sub.chart.dim();
        if r.is_empty() {
            return Ok((0..n).map(|i| self.sub.unit(i)).collect());
        }
        Ok(Matrix::from_rows(r).kernel())
    }
}

/// Generic rank of `vectors` (functions on `N`), required to equal the
/// rank at every nonsingular sample point.
pub(crate) fn fmt_comps(chart: &Chart, prefix: &str, comps: &[Rf]) -> String {
    let terms: Vec<String> = comps
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| format!("({c}){prefix}{}", chart.coord(i)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub(crate) fn constant_rank(
    what: &'static str,
    vectors: &[Vec<Rf>],
    len: usize,
    points: &[Vec<Rational>],
) -> Result<usize, ReductionError> {
    let generic = crate::linalg::span_rank(vectors, len);
    let mut ranks = vec![generic];
    for p in points {
        let vals: Result<Vec<Vec<Rational>>, _> = vectors
            .iter()
            .map(|v| v.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>, _>>())
            .collect();
        if let Ok(vals) = vals {
            ranks.push(crate::linalg::span_rank(&vals, len));
        }
    }
    if ranks.iter().any(|&r| r != generic) {
        return Err(ReductionError::RankInconsistent { what, ranks });
    }
    Ok(generic)
}

#[cfg(test)]
mod tests;
