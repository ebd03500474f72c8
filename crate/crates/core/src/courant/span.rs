use num_traits::Zero;

use crate::calculus::Chart;
use crate::linalg::{span_rank, Matrix};
use crate::sample::nonsingular_points;
use crate::{Rational, Rf};

use super::{bracket, neutral_pairing, omega_pairing, BigSection, CourantError, Twist};

/// A subbundle given by generating sections and its declared rank.
#[derive(Clone, Debug)]
pub struct SectionSpan {
    pub generators: Vec<BigSection>,
    pub declared_rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropyReport {
    /// First generator pair with nonzero neutral pairing.
    pub non_isotropic_pair: Option<(usize, usize)>,
    pub ranks_at_points: Vec<usize>,
    /// Isotropic with rank equal to the chart dimension at every point.
    pub almost_dirac: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipMode {
    /// Decided by exact elimination over rational functions.
    Symbolic,
    /// Decided at sample points only (symbolic rank differs from declared).
    SamplePoints,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub mode: MembershipMode,
    /// Generator pairs whose bracket leaves the span.
    pub failures: Vec<(usize, usize)>,
    pub closed: bool,
}

impl SectionSpan {
    pub fn new(generators: Vec<BigSection>, declared_rank: usize) -> Self {
        assert!(
            !generators.is_empty(),
            "a span needs at least one generator"
        );
        SectionSpan {
            generators,
            declared_rank,
        }
    }

    pub fn chart(&self) -> &Chart {
        self.generators[0].chart()
    }

    fn columns(&self) -> Vec<Vec<Rf>> {
        self.generators.iter().map(BigSection::comps).collect()
    }

    fn guards(&self) -> Vec<Rf> {
        self.columns()
            .into_iter()
            .flatten()
            .filter(|c| !c.is_polynomial())
            .collect()
    }

    /// Non-singular sample points for all generator entries.
    pub fn sample_points(&self, seed: u64, count: usize) -> Vec<Vec<Rational>> {
        let guards = self.guards();
        let refs: Vec<&Rf> = guards.iter().collect();
        nonsingular_points(seed, self.chart().dim(), count, &refs)
    }

    /// Ranks at the sample points; errors if one contradicts the declared rank.
    pub fn ranks(&self, points: &[Vec<Rational>]) -> Result<Vec<usize>, CourantError> {
        if points.is_empty() {
            return Err(CourantError::NoSamplePoints);
        }
        let len = 2 * self.chart().dim();
        let mut out = Vec::new();
        for (k, p) in points.iter().enumerate() {
            let cols: Vec<Vec<Rational>> = self
                .generators
                .iter()
                .map(|g| g.eval_at(p))
                .collect::<Result<_, _>>()?;
            let r = span_rank(&cols, len);
            if r != self.declared_rank {
                return Err(CourantError::RankDeficiency {
                    point: k,
                    declared: self.declared_rank,
                    found: r,
                });
            }
            out.push(r);
        }
        Ok(out)
    }

    pub fn isotropy_check(&self, points: &[Vec<Rational>]) -> Result<IsotropyReport, CourantError> {
        let ranks = self.ranks(points)?;
        let mut bad = None;
        'outer: for i in 0..self.generators.len() {
            for j in i..self.generators.len() {
                if !neutral_pairing(&self.generators[i], &self.generators[j])?.is_zero() {
                    bad = Some((i, j));
                    break 'outer;
                }
            }
        }
        let n = self.chart().dim();
        Ok(IsotropyReport {
            almost_dirac: bad.is_none() && ranks.iter().all(|&r| r == n),
            non_isotropic_pair: bad,
            ranks_at_points: ranks,
        })
    }

    pub fn closure_check(
        &self,
        points: &[Vec<Rational>],
        twist: Option<&Twist>,
    ) -> Result<ClosureReport, CourantError> {
        self.ranks(points)?;
        let len = 2 * self.chart().dim();
        let cols = self.columns();
        let symbolic = span_rank(&cols, len) == self.declared_rank;
        let gens = Matrix::from_columns(len, &cols);
        let mut failures = Vec::new();
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let b = bracket(&self.generators[i], &self.generators[j], twist);
                let inside = if symbolic {
                    gens.solve(&b.comps()).is_some()
                } else {
                    pointwise_member(&self.generators, &b, points)?
                };
                if !inside {
                    failures.push((i, j));
                }
            }
        }
        Ok(ClosureReport {
            mode: if symbolic {
                MembershipMode::Symbolic
            } else {
                MembershipMode::SamplePoints
            },
            closed: failures.is_empty(),
            failures,
        })
    }
}

fn pointwise_member(
    gens: &[BigSection],
    s: &BigSection,
    points: &[Vec<Rational>],
) -> Result<bool, CourantError> {
    for p in points {
        let cols: Vec<Vec<Rational>> = gens
            .iter()
            .map(|g| g.eval_at(p))
            .collect::<Result<_, _>>()?;
        let v = s.eval_at(p)?;
        let m = Matrix::from_columns(v.len(), &cols);
        if m.solve(&v).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tangent projection of a span at a point with the 2-form it inherits.
#[derive(Clone, Debug, PartialEq)]
pub struct PresymplecticData {
    /// Basis of `pr_TM L` at the point (least-index choice among generators).
    pub distribution: Vec<Vec<Rational>>,
    /// Generator indices realizing `distribution`.
    pub generator_indices: Vec<usize>,
    /// `θ[a][b] = ω(g_a, g_b)` on those generators.
    pub theta: Matrix<Rational>,
}

pub fn presymplectic_data(
    span: &SectionSpan,
    point: &[Rational],
) -> Result<PresymplecticData, CourantError> {
    let n = span.chart().dim();
    let projections: Vec<Vec<Rational>> = span
        .generators
        .iter()
        .map(|g| g.vector.eval_at(point))
        .collect::<Result<_, _>>()?;
    let idx = Matrix::from_columns(n, &projections).independent_columns();
    let basis: Vec<Vec<Rational>> = idx.iter().map(|&k| projections[k].clone()).collect();
    let mut theta = Matrix::zeros(idx.len(), idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            let w = omega_pairing(&span.generators[i], &span.generators[j])?;
            theta[(a, b)] = w
                .eval(point)
                .map_err(crate::calculus::CalculusError::from)?;
        }
    }
    Ok(PresymplecticData {
        distribution: basis,
        generator_indices: idx,
        theta,
    })
}
