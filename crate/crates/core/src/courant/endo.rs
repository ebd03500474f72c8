use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::calculus::{CalculusError, Chart};
use crate::linalg::Matrix;
use crate::{Rational, Rf};

use super::{bracket, BigSection, CourantError, Twist};

/// Endomorphism of `TM ⊕ T*M` in block form
/// `Φ(X, α) = (aX + pα, sX + dα)` on component vectors.
#[derive(Clone, PartialEq)]
pub struct BigEndo {
    chart: Chart,
    matrix: Matrix<Rf>,
}

impl BigEndo {
    pub fn from_blocks(
        chart: &Chart,
        a: &Matrix<Rf>,
        p: &Matrix<Rf>,
        s: &Matrix<Rf>,
        d: &Matrix<Rf>,
    ) -> Self {
        let n = chart.dim();
        for m in [a, p, s, d] {
            assert_eq!((m.rows(), m.cols()), (n, n), "block shape");
        }
        BigEndo {
            chart: chart.clone(),
            matrix: Matrix::from_blocks(a, p, s, d),
        }
    }

    pub fn from_matrix(chart: &Chart, matrix: Matrix<Rf>) -> Self {
        assert_eq!(
            (matrix.rows(), matrix.cols()),
            (2 * chart.dim(), 2 * chart.dim())
        );
        BigEndo {
            chart: chart.clone(),
            matrix,
        }
    }

    pub fn identity(chart: &Chart) -> Self {
        Self::from_matrix(chart, Matrix::identity(2 * chart.dim()))
    }

    pub fn zero(chart: &Chart) -> Self {
        let n = 2 * chart.dim();
        Self::from_matrix(chart, Matrix::zeros(n, n))
    }

    /// Projection onto `TM` along `T*M`; not g-skew.
    pub fn tangent_projection(chart: &Chart) -> Self {
        let n = chart.dim();
        let z = Matrix::zeros(n, n);
        Self::from_blocks(chart, &Matrix::identity(n), &z, &z, &z)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix<Rf> {
        &self.matrix
    }

    /// Blocks `(a, p, s, d)`.
    pub fn blocks(&self) -> (Matrix<Rf>, Matrix<Rf>, Matrix<Rf>, Matrix<Rf>) {
        let n = self.chart.dim();
        (
            self.matrix.block(0, 0, n, n),
            self.matrix.block(0, n, n, n),
            self.matrix.block(n, 0, n, n),
            self.matrix.block(n, n, n, n),
        )
    }

    pub fn apply(&self, s: &BigSection) -> BigSection {
        assert!(self.chart.same(s.chart()), "chart mismatch");
        BigSection::from_comps(&self.chart, &self.matrix.mul_vec(&s.comps()))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::from_matrix(&self.chart, self.matrix.mul(&other.matrix))
    }

    /// First frame pair `(i, j)` with `g(Φe_i, e_j) + g(e_i, Φe_j) ≠ 0`.
    /// In matrix form g-skew-symmetry is `JΦ + ΦᵀJ = 0` with `J` the
    /// block swap.
    pub fn skew_witness(&self) -> Option<(usize, usize)> {
        let m = &self.matrix;
        let n = self.chart.dim();
        let two_n = 2 * n;
        let swap = |k: usize| if k < n { k + n } else { k - n };
        for i in 0..two_n {
            for j in i..two_n {
                // 2g(Φe_i, e_j) = (Φe_i)_{swap j}
                let v = &m[(swap(j), i)] + &m[(swap(i), j)];
                if !v.is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_g_skew(&self) -> bool {
        self.skew_witness().is_none()
    }

    /// `ε` with `Φ² = ε Id`, if `ε ∈ {−1, 0, 1}`.
    pub fn potency(&self) -> Option<i64> {
        let sq = self.matrix.mul(&self.matrix);
        let two_n = 2 * self.chart.dim();
        [-1, 0, 1]
            .into_iter()
            .find(|&e| sq == Matrix::scalar(two_n, Rf::from_int(e)))
    }

    pub fn eval_at(&self, point: &[Rational]) -> Result<Matrix<Rational>, CalculusError> {
        self.matrix
            .try_map(|c| c.eval(point))
            .map_err(CalculusError::from)
    }
}

impl fmt::Debug for BigEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigEndo{:?}", self.matrix)
    }
}

/// `N_Φ(s1,s2) = [Φs1,Φs2] − Φ[s1,Φs2] − Φ[Φs1,s2] + Φ²[s1,s2]`.
pub fn courant_nijenhuis_torsion(
    phi: &BigEndo,
    s1: &BigSection,
    s2: &BigSection,
    twist: Option<&Twist>,
) -> Result<BigSection, CourantError> {
    phi.chart().ensure_same(s1.chart())?;
    phi.chart().ensure_same(s2.chart())?;
    Ok(torsion(phi, s1, s2, twist))
}

pub(crate) fn torsion(
    phi: &BigEndo,
    s1: &BigSection,
    s2: &BigSection,
    twist: Option<&Twist>,
) -> BigSection {
    let p1 = phi.apply(s1);
    let p2 = phi.apply(s2);
    let b12 = bracket(s1, s2, twist);
    bracket(&p1, &p2, twist)
        .sub(&phi.apply(&bracket(s1, &p2, twist)))
        .sub(&phi.apply(&bracket(&p1, s2, twist)))
        .add(&phi.apply(&phi.apply(&b12)))
}

#[derive(Clone, Debug)]
pub struct TorsionEntry {
    pub i: usize,
    pub j: usize,
    pub value: BigSection,
}

/// Torsion on all frame pairs `i < j` (the torsion is antisymmetric).
#[derive(Clone, Debug)]
pub struct TorsionReport {
    /// Nonzero entries only, ordered by `(i, j)`.
    pub nonzero: Vec<TorsionEntry>,
    pub pairs_checked: usize,
    pub all_zero: bool,
    /// The frame table decides integrability only for g-skew, ε-potent Φ.
    pub conclusive: bool,
    pub label: Option<String>,
    pub skew_witness: Option<(usize, usize)>,
    pub potency: Option<i64>,
}

pub const NON_TENSORIAL_LABEL: &str = "non-tensorial: frame table not conclusive";

pub fn torsion_frame_report(phi: &BigEndo, twist: Option<&Twist>) -> TorsionReport {
    let chart = phi.chart();
    let frame = BigSection::frame(chart);
    let pairs: Vec<(usize, usize)> = (0..frame.len())
        .flat_map(|i| (i + 1..frame.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<BigSection> = pairs
        .par_iter()
        .map(|&(i, j)| torsion(phi, &frame[i], &frame[j], twist))
        .collect();
    let nonzero: Vec<TorsionEntry> = pairs
        .iter()
        .zip(values)
        .filter(|(_, v)| !v.is_zero())
        .map(|(&(i, j), value)| TorsionEntry { i, j, value })
        .collect();
    let skew_witness = phi.skew_witness();
    let potency = phi.potency();
    let conclusive = skew_witness.is_none() && potency.is_some();
    TorsionReport {
        all_zero: nonzero.is_empty(),
        nonzero,
        pairs_checked: pairs.len(),
        conclusive,
        label: (!conclusive).then(|| NON_TENSORIAL_LABEL.to_string()),
        skew_witness,
        potency,
    }
}
