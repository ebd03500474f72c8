//! Generalized almost c.p.s. structures
//! `Φ(X, α) = (AX + ♯π α, ♭σ X − α∘A)` with `Φ² = ε Id`.

mod concomitant;
mod construct;
mod integrability;
mod leaf;
mod transform;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::calculus::{CalculusError, Chart, KForm, KVector, OneOneTensor};
use crate::courant::{BigEndo, CourantError};
use crate::linalg::Matrix;
use crate::{Rational, Rf};

pub use concomitant::{
    bracket_form_residual, concomitant_c, concomitant_r, concomitant_r_table, magri_residual,
    pn_hierarchy_check, schouten_concomitant, HierarchyReport, PairTable,
};
pub use construct::{
    classical_structure, cps_map_check, direct_sum, opposite, symplectic_structure,
    twisted_direct_sum, MapReport, PolyMap, SymplecticVariant,
};
pub use integrability::{
    integrability_check, twisted_integrability_check, ConditionReport, IntegrabilityReport, Overall,
};
pub use leaf::{leaf_normal_form, LeafNormalForm};
pub use transform::{
    beta_transform, gauge_endo, gauge_transform, gauge_transform_algebraic, gcps_to_hitchin,
    hitchin_to_gcps, phi_from_compatible_pair, phi_w_eigencheck, EigencheckReport, HitchinPair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    Complex,
    Paracomplex,
    Subtangent,
}

impl Epsilon {
    pub fn from_i64(e: i64) -> Option<Self> {
        match e {
            -1 => Some(Epsilon::Complex),
            1 => Some(Epsilon::Paracomplex),
            0 => Some(Epsilon::Subtangent),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Epsilon::Complex => -1,
            Epsilon::Paracomplex => 1,
            Epsilon::Subtangent => 0,
        }
    }

    pub fn rf(self) -> Rf {
        Rf::from_int(self.value())
    }

    pub fn name(self) -> &'static str {
        match self {
            Epsilon::Complex => "complex",
            Epsilon::Paracomplex => "paracomplex",
            Epsilon::Subtangent => "subtangent",
        }
    }
}

pub const SQUARE_LAW: &str = "A² = εId − ♯π∘♭σ";
pub const PI_COMPATIBLE: &str = "π(α∘A,β) = π(α,β∘A)";
pub const SIGMA_COMPATIBLE: &str = "σ(AX,Y) = σ(X,AY)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcpsError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Courant(#[from] CourantError),
    #[error("{what} must have degree {expected}, found {found}")]
    Degree {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("Φ is not g-skew at entries ({row}, {col})")]
    NotGSkew { row: usize, col: usize },
    #[error("Φ² is not εId for ε in {{-1, 0, 1}}")]
    NotPotent,
    #[error("{condition} fails at entry ({row}, {col})")]
    Compatibility {
        condition: &'static str,
        row: usize,
        col: usize,
    },
    #[error("ε = -1 and the tangent flag need an even-dimensional chart, found dimension {dim}")]
    OddDimension { dim: usize },
    #[error("π is degenerate")]
    DegeneratePi,
    #[error("{what} is degenerate")]
    Degenerate { what: &'static str },
    #[error("{what} is not closed")]
    NotClosed { what: &'static str },
    #[error("{what}: {witness}")]
    Precondition { what: &'static str, witness: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// A validated generalized almost c.p.s. structure `(ε, A, π, σ)`.
#[derive(Clone, PartialEq)]
pub struct Gcps {
    chart: Chart,
    epsilon: Epsilon,
    a: OneOneTensor,
    pi: KVector,
    sigma: KForm,
}

/// Matrix of `♯π` acting on covector components.
pub fn sharp_matrix(pi: &KVector) -> Matrix<Rf> {
    pi.to_matrix().transpose()
}

/// Matrix of `♭σ` acting on vector components.
pub fn flat_matrix(sigma: &KForm) -> Matrix<Rf> {
    sigma.to_matrix().transpose()
}

pub(crate) fn pi_from_sharp(chart: &Chart, p: &Matrix<Rf>) -> KVector {
    KVector::from_matrix(chart, &p.transpose())
}

pub(crate) fn sigma_from_flat(chart: &Chart, s: &Matrix<Rf>) -> KForm {
    KForm::from_matrix(chart, &s.transpose())
}

/// First entry where `m + mᵀ ≠ 0`.
pub(crate) fn skew_defect(m: &Matrix<Rf>) -> Option<(usize, usize)> {
    m.add(&m.transpose()).first_nonzero()
}

pub(crate) fn check_square_and_compat(
    eps: Epsilon,
    a: &Matrix<Rf>,
    p: &Matrix<Rf>,
    s: &Matrix<Rf>,
) -> Result<(), GcpsError> {
    let n = a.rows();
    let sq = a.mul(a).add(&p.mul(s)).sub(&Matrix::scalar(n, eps.rf()));
    let checks = [
        (SQUARE_LAW, sq),
        (PI_COMPATIBLE, p.mul(&a.transpose()).sub(&a.mul(p))),
        (SIGMA_COMPATIBLE, s.mul(a).sub(&a.transpose().mul(s))),
    ];
    for (condition, m) in checks {
        if let Some((row, col)) = m.first_nonzero() {
            return Err(GcpsError::Compatibility {
                condition,
                row,
                col,
            });
        }
    }
    Ok(())
}

impl Gcps {
    pub fn assemble(
        epsilon: Epsilon,
        a: OneOneTensor,
        pi: KVector,
        sigma: KForm,
    ) -> Result<Self, GcpsError> {
        let chart = a.chart().clone();
        chart.ensure_same(pi.chart())?;
        chart.ensure_same(sigma.chart())?;
        if pi.degree() != 2 {
            return Err(GcpsError::Degree {
                what: "π",
                expected: 2,
                found: pi.degree(),
            });
        }
        if sigma.degree() != 2 {
            return Err(GcpsError::Degree {
                what: "σ",
                expected: 2,
                found: sigma.degree(),
            });
        }
        if epsilon == Epsilon::Complex && chart.dim() % 2 == 1 {
            return Err(GcpsError::OddDimension { dim: chart.dim() });
        }
        check_square_and_compat(
            epsilon,
            a.matrix(),
            &sharp_matrix(&pi),
            &flat_matrix(&sigma),
        )?;
        Ok(Gcps {
            chart,
            epsilon,
            a,
            pi,
            sigma,
        })
    }

    /// Structure from block matrices `(A, ♯π, ♭σ)`; the blocks must already
    /// be skew where required.
    pub(crate) fn from_matrices(
        chart: &Chart,
        epsilon: Epsilon,
        a: Matrix<Rf>,
        p: &Matrix<Rf>,
        s: &Matrix<Rf>,
    ) -> Result<Self, GcpsError> {
        if let Some((row, col)) = skew_defect(p) {
            return Err(GcpsError::NotGSkew {
                row: row + chart.dim(),
                col,
            });
        }
        if let Some((row, col)) = skew_defect(s) {
            return Err(GcpsError::NotGSkew {
                row,
                col: col + chart.dim(),
            });
        }
        Self::assemble(
            epsilon,
            OneOneTensor::new(chart, a),
            pi_from_sharp(chart, p),
            sigma_from_flat(chart, s),
        )
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn a(&self) -> &OneOneTensor {
        &self.a
    }

    pub fn pi(&self) -> &KVector {
        &self.pi
    }

    pub fn sigma(&self) -> &KForm {
        &self.sigma
    }

    pub fn sharp_matrix(&self) -> Matrix<Rf> {
        sharp_matrix(&self.pi)
    }

    pub fn flat_matrix(&self) -> Matrix<Rf> {
        flat_matrix(&self.sigma)
    }

    pub fn to_big_endo(&self) -> BigEndo {
        let a = self.a.matrix();
        BigEndo::from_blocks(
            &self.chart,
            a,
            &self.sharp_matrix(),
            &self.flat_matrix(),
            &a.transpose().neg(),
        )
    }

    pub fn from_big_endo(phi: &BigEndo) -> Result<Self, GcpsError> {
        if let Some((row, col)) = phi.skew_witness() {
            return Err(GcpsError::NotGSkew { row, col });
        }
        let eps = phi
            .potency()
            .and_then(Epsilon::from_i64)
            .ok_or(GcpsError::NotPotent)?;
        let (a, p, s, _) = phi.blocks();
        Self::from_matrices(phi.chart(), eps, a, &p, &s)
    }

    /// `σ_A(X,Y) = σ(AX,Y)`; antisymmetric because σ is compatible with A.
    pub fn sigma_associated(&self) -> KForm {
        let m = self.a.matrix().transpose().mul(&self.sigma.to_matrix());
        debug_assert!(skew_defect(&m).is_none());
        KForm::from_matrix(&self.chart, &m)
    }

    /// Same chart and ε with replaced tensors; the caller keeps the
    /// algebraic conditions.
    pub(crate) fn with_parts(&self, a: OneOneTensor, pi: KVector, sigma: KForm) -> Self {
        Gcps {
            chart: self.chart.clone(),
            epsilon: self.epsilon,
            a,
            pi,
            sigma,
        }
    }

    /// Generalized almost tangent refinement: ε = 0 and `im Φ = ker Φ`,
    /// i.e. `rank Φ = n`, checked at each point.
    pub fn tangent_flag(&self, points: &[Vec<Rational>]) -> Result<bool, GcpsError> {
        let n = self.chart.dim();
        if n % 2 == 1 {
            return Err(GcpsError::OddDimension { dim: n });
        }
        if self.epsilon != Epsilon::Subtangent {
            return Ok(false);
        }
        let phi = self.to_big_endo();
        for p in points {
            if phi.eval_at(p)?.rank() != n {
                return Ok(false);
            }
        }
        Ok(!points.is_empty())
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.sharp_matrix().determinant().is_zero()
    }
}

impl fmt::Debug for Gcps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Gcps {{ chart: {:?}, epsilon: {}, A: {}, pi: {}, sigma: {} }}",
            self.chart,
            self.epsilon.value(),
            self.a,
            self.pi,
            self.sigma
        )
    }
}
