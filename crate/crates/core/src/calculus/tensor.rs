use std::fmt;

use num_traits::Zero;

use crate::linalg::Matrix;
use crate::{Rational, Rf};

use super::{CalculusError, Chart, KForm, VectorField};

/// Endomorphism of the tangent bundle; `matrix[(i, j)] = A^i_j`, so that
/// `A ∂_j = Σ_i A^i_j ∂_i`.
#[derive(Clone, PartialEq)]
pub struct OneOneTensor {
    chart: Chart,
    matrix: Matrix<Rf>,
}

impl OneOneTensor {
    pub fn new(chart: &Chart, matrix: Matrix<Rf>) -> Self {
        assert_eq!(
            (matrix.rows(), matrix.cols()),
            (chart.dim(), chart.dim()),
            "tensor shape"
        );
        OneOneTensor {
            chart: chart.clone(),
            matrix,
        }
    }

    pub fn identity(chart: &Chart) -> Self {
        Self::new(chart, Matrix::identity(chart.dim()))
    }

    pub fn zero(chart: &Chart) -> Self {
        Self::new(chart, Matrix::zeros(chart.dim(), chart.dim()))
    }

    pub fn scalar(chart: &Chart, f: Rf) -> Self {
        Self::new(chart, Matrix::scalar(chart.dim(), f))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix<Rf> {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        assert!(self.chart.same(x.chart()), "chart mismatch");
        VectorField::new(&self.chart, self.matrix.mul_vec(x.comps()))
    }

    /// `α∘A`, i.e. the transpose action on covectors.
    pub fn apply_form(&self, alpha: &KForm) -> KForm {
        assert!(self.chart.same(alpha.chart()), "chart mismatch");
        KForm::covector(
            &self.chart,
            &self.matrix.transpose().mul_vec(&alpha.covector_comps()),
        )
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.chart, self.matrix.mul(&other.matrix))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(&self.chart);
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.chart, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.chart, self.matrix.sub(&other.matrix))
    }

    pub fn scale(&self, f: &Rf) -> Self {
        Self::new(&self.chart, self.matrix.scale(f))
    }

    /// `(L_X A)^i_j = X(A^i_j) − A^k_j ∂_k X^i + A^i_k ∂_j X^k`.
    pub fn lie(&self, x: &VectorField) -> Self {
        assert!(self.chart.same(x.chart()), "chart mismatch");
        let n = self.chart.dim();
        let dx: Vec<Vec<Rf>> = (0..n)
            .map(|i| (0..n).map(|k| x.comp(i).partial(k)).collect())
            .collect();
        let m = Matrix::from_fn(n, n, |i, j| {
            let mut acc = x.apply(&self.matrix[(i, j)]);
            for k in 0..n {
                if !dx[i][k].is_zero() && !self.matrix[(k, j)].is_zero() {
                    acc = &acc - &(&self.matrix[(k, j)] * &dx[i][k]);
                }
                if !dx[k][j].is_zero() && !self.matrix[(i, k)].is_zero() {
                    acc = &acc + &(&self.matrix[(i, k)] * &dx[k][j]);
                }
            }
            acc
        });
        Self::new(&self.chart, m)
    }

    /// `N_A(X,Y) = [AX,AY] − A[AX,Y] − A[X,AY] + A²[X,Y]`.
    pub fn nijenhuis(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let ax = self.apply(x);
        let ay = self.apply(y);
        let xy = x.bracket(y);
        ax.bracket(&ay)
            .sub(&self.apply(&ax.bracket(y)))
            .sub(&self.apply(&x.bracket(&ay)))
            .add(&self.apply(&self.apply(&xy)))
    }

    /// `N_A(∂_i, ∂_j)` for all `i < j`.
    pub fn nijenhuis_table(&self) -> Vec<((usize, usize), VectorField)> {
        let frame = VectorField::frame(&self.chart);
        let n = self.chart.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(((i, j), self.nijenhuis(&frame[i], &frame[j])));
            }
        }
        out
    }

    pub fn eval_at(&self, point: &[Rational]) -> Result<Matrix<Rational>, CalculusError> {
        self.matrix
            .try_map(|c| c.eval(point))
            .map_err(CalculusError::from)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.chart.dim())
    }

    pub fn map_comps(
        &self,
        chart: &Chart,
        f: impl Fn(&Rf) -> Result<Rf, CalculusError>,
    ) -> Result<Self, CalculusError> {
        Ok(Self::new(chart, self.matrix.try_map(f)?))
    }
}

impl fmt::Display for OneOneTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.matrix.rows() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.matrix.cols() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.matrix[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for OneOneTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
