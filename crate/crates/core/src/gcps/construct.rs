use num_traits::{One, Zero};

use crate::calculus::{CalculusError, Chart, KForm, KVector, Multi, OneOneTensor};
use crate::linalg::Matrix;
use crate::{Poly, Rf};

use super::{hitchin_to_gcps, ConditionReport, Epsilon, Gcps, GcpsError, HitchinPair, SQUARE_LAW};

/// Structure with `π = 0`, `σ = 0` from `A² = εId`.
pub fn classical_structure(a: &OneOneTensor, epsilon: Epsilon) -> Result<Gcps, GcpsError> {
    let n = a.chart().dim();
    if let Some((row, col)) = a
        .matrix()
        .mul(a.matrix())
        .sub(&Matrix::scalar(n, epsilon.rf()))
        .first_nonzero()
    {
        return Err(GcpsError::Compatibility {
            condition: SQUARE_LAW,
            row,
            col,
        });
    }
    Gcps::assemble(
        epsilon,
        a.clone(),
        KVector::zero(a.chart(), 2),
        KForm::zero(a.chart(), 2),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymplecticVariant {
    /// `A = 0`, `σ = −εϖ`.
    First,
    /// `A = Id`, `σ = (1 − ε)ϖ`.
    Second,
}

/// `♭ϖ∘♯π = −Id` with `A = 0` or `A = Id`.
pub fn symplectic_structure(
    varpi: &KForm,
    epsilon: Epsilon,
    variant: SymplecticVariant,
) -> Result<Gcps, GcpsError> {
    let c = varpi.chart();
    let a = match variant {
        SymplecticVariant::First => OneOneTensor::zero(c),
        SymplecticVariant::Second => OneOneTensor::identity(c),
    };
    hitchin_to_gcps(&HitchinPair::new(varpi.clone(), a)?, epsilon)
}

/// `(A, −π, −σ)`.
pub fn opposite(g: &Gcps) -> Gcps {
    g.with_parts(g.a().clone(), g.pi().neg(), g.sigma().neg())
}

fn embed_multi<K>(
    m: &Multi<K>,
    from: &Chart,
    target: &Chart,
    offset: usize,
) -> Result<Multi<K>, CalculusError> {
    let map: Vec<Option<usize>> = (0..from.dim()).map(|i| Some(offset + i)).collect();
    m.reindex_frame(target, &map, |f| from.transfer(f, target))
}

/// Block-diagonal structure on the product chart; the coordinate names
/// of the factors must be disjoint.
pub fn direct_sum(g1: &Gcps, g2: &Gcps) -> Result<Gcps, GcpsError> {
    if g1.epsilon() != g2.epsilon() {
        return Err(GcpsError::Precondition {
            what: "direct sum needs equal ε",
            witness: format!("{} vs {}", g1.epsilon().value(), g2.epsilon().value()),
        });
    }
    let (c1, c2) = (g1.chart(), g2.chart());
    if let Some(shared) = c1.coords().iter().find(|x| c2.index_of(x).is_some()) {
        return Err(GcpsError::Precondition {
            what: "factor charts share a coordinate",
            witness: shared.clone(),
        });
    }
    let names: Vec<&str> = c1
        .coords()
        .iter()
        .chain(c2.coords())
        .map(String::as_str)
        .collect();
    let c = Chart::new(&format!("{}x{}", c1.name(), c2.name()), &names)?;
    let (n1, n) = (c1.dim(), c.dim());
    let mut rows = vec![vec![Rf::zero(); n]; n];
    for (src, g, off) in [(c1, g1, 0), (c2, g2, n1)] {
        let m = g.a().matrix();
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                rows[off + i][off + j] = src.transfer(&m[(i, j)], &c)?;
            }
        }
    }
    let a = Matrix::from_rows(rows);
    let pi = embed_multi(g1.pi(), c1, &c, 0)?.add(&embed_multi(g2.pi(), c2, &c, n1)?);
    let sigma = embed_multi(g1.sigma(), c1, &c, 0)?.add(&embed_multi(g2.sigma(), c2, &c, n1)?);
    Gcps::assemble(g1.epsilon(), OneOneTensor::new(&c, a), pi, sigma)
}

/// `op(G1) ⊕ G2`.
pub fn twisted_direct_sum(g1: &Gcps, g2: &Gcps) -> Result<Gcps, GcpsError> {
    direct_sum(&opposite(g1), g2)
}

/// A polynomial map `f` given by the target coordinates as polynomials in
/// the source coordinates.
#[derive(Clone, Debug)]
pub struct PolyMap {
    source: Chart,
    target: Chart,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source: &Chart, target: &Chart, comps: &[Rf]) -> Result<Self, GcpsError> {
        if comps.len() != target.dim() {
            return Err(GcpsError::Dimension(format!(
                "map has {} components for a {}-dimensional target",
                comps.len(),
                target.dim()
            )));
        }
        let polys = comps
            .iter()
            .map(|f| {
                let c = f
                    .denominator()
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| GcpsError::Precondition {
                        what: "map component is not a polynomial",
                        witness: f.to_string(),
                    })?;
                Ok(f.numerator()
                    .scale(&(crate::Rational::one() / c))
                    .lift(source.vars()))
            })
            .collect::<Result<Vec<_>, GcpsError>>()?;
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            comps: polys,
        })
    }

    pub fn identity(chart: &Chart) -> Self {
        let comps: Vec<Rf> = (0..chart.dim()).map(|i| chart.x(i)).collect();
        Self::new(chart, chart, &comps).expect("identity map")
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    /// `J[a][i] = ∂f^a/∂x^i`.
    pub fn jacobian(&self) -> Matrix<Rf> {
        Matrix::from_fn(self.target.dim(), self.source.dim(), |a, i| {
            Rf::from_poly(self.comps[a].partial(i))
        })
    }

    /// `h∘f` for a function `h` on the target chart.
    pub fn pull(&self, h: &Rf) -> Result<Rf, GcpsError> {
        h.lift(self.target.vars())
            .substitute(&self.comps, self.source.vars())
            .map_err(|e| GcpsError::Calculus(e.into()))
    }

    fn pull_matrix(&self, m: &Matrix<Rf>) -> Result<Matrix<Rf>, GcpsError> {
        m.try_map(|h| self.pull(h))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub pi_related: ConditionReport,
    pub sigma_pullback: ConditionReport,
    pub a_intertwined: ConditionReport,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.pi_related.passed && self.sigma_pullback.passed && self.a_intertwined.passed
    }
}

fn matrix_condition(name: &'static str, residual: Matrix<Rf>) -> ConditionReport {
    let first = residual.first_nonzero();
    ConditionReport {
        name,
        passed: first.is_none(),
        witness: first.map(|(i, j)| format!("entry ({i}, {j}): {}", residual[(i, j)])),
    }
}

/// `π2∘f = J π1 Jᵀ`, `σ1 = Jᵀ (σ2∘f) J`, `(A2∘f) J = J A1`.
pub fn cps_map_check(f: &PolyMap, g1: &Gcps, g2: &Gcps) -> Result<MapReport, GcpsError> {
    f.source.ensure_same(g1.chart())?;
    f.target.ensure_same(g2.chart())?;
    let j = f.jacobian();
    let jt = j.transpose();
    let pi1 = g1.pi().to_matrix();
    let pi2 = f.pull_matrix(&g2.pi().to_matrix())?;
    let s1 = g1.sigma().to_matrix();
    let s2 = f.pull_matrix(&g2.sigma().to_matrix())?;
    let a2 = f.pull_matrix(g2.a().matrix())?;
    Ok(MapReport {
        pi_related: matrix_condition("pi2 = f_* pi1", pi2.sub(&j.mul(&pi1).mul(&jt))),
        sigma_pullback: matrix_condition("sigma1 = f^* sigma2", s1.sub(&jt.mul(&s2).mul(&j))),
        a_intertwined: matrix_condition("A2 f_* = f_* A1", a2.mul(&j).sub(&j.mul(g1.a().matrix()))),
    })
}
