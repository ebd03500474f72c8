use num_traits::{One, Zero};

use crate::calculus::{Chart, KForm, KVector, OneOneTensor};
use crate::courant::BigEndo;
use crate::linalg::Matrix;
use crate::ring::GaussianRational;
use crate::{Rational, Rf};

use super::{flat_matrix, sharp_matrix, Epsilon, Gcps, GcpsError, SIGMA_COMPATIBLE};

fn check_degree(what: &'static str, found: usize) -> Result<(), GcpsError> {
    if found != 2 {
        return Err(GcpsError::Degree {
            what,
            expected: 2,
            found,
        });
    }
    Ok(())
}

/// `𝔅 = [[I, 0], [♭B, I]]`.
pub fn gauge_endo(b: &KForm) -> BigEndo {
    let c = b.chart();
    let n = c.dim();
    BigEndo::from_blocks(
        c,
        &Matrix::identity(n),
        &Matrix::zeros(n, n),
        &flat_matrix(b),
        &Matrix::identity(n),
    )
}

/// Gauge by a closed 2-form: `A + ♯π♭B`, `♯π`,
/// `♭σ − ♭B♯π♭B − ♭B A − ᵗA ♭B`.
pub fn gauge_transform(g: &Gcps, b: &KForm) -> Result<Gcps, GcpsError> {
    g.chart().ensure_same(b.chart())?;
    check_degree("B", b.degree())?;
    if !b.d().is_zero() {
        return Err(GcpsError::NotClosed { what: "B" });
    }
    gauge_transform_algebraic(g, b)
}

/// Gauge formula without the closedness check. The result is
/// algebraically equivalent only; integrability is not transported.
pub fn gauge_transform_algebraic(g: &Gcps, b: &KForm) -> Result<Gcps, GcpsError> {
    g.chart().ensure_same(b.chart())?;
    check_degree("B", b.degree())?;
    let a = g.a().matrix();
    let p = g.sharp_matrix();
    let s = g.flat_matrix();
    let fb = flat_matrix(b);
    let a2 = a.add(&p.mul(&fb));
    let s2 = s
        .sub(&fb.mul(&p).mul(&fb))
        .sub(&fb.mul(a))
        .sub(&a.transpose().mul(&fb));
    Gcps::from_matrices(g.chart(), g.epsilon(), a2, &p, &s2)
}

/// `𝔅′⁻¹ Φ 𝔅′` with `𝔅′ = [[I, ♯β], [0, I]]`.
pub fn beta_transform(phi: &BigEndo, beta: &KVector) -> Result<BigEndo, GcpsError> {
    phi.chart().ensure_same(beta.chart())?;
    check_degree("β", beta.degree())?;
    let c = phi.chart();
    let n = c.dim();
    let (i, z) = (Matrix::identity(n), Matrix::zeros(n, n));
    let sb = sharp_matrix(beta);
    let fwd = BigEndo::from_blocks(c, &i, &sb, &z, &i);
    let inv = BigEndo::from_blocks(c, &i, &sb.neg(), &z, &i);
    Ok(inv.compose(phi).compose(&fwd))
}

/// Symplectic form `ϖ` with a compatible `A` whose `ϖ_A` is closed.
#[derive(Clone, Debug, PartialEq)]
pub struct HitchinPair {
    varpi: KForm,
    a: OneOneTensor,
}

impl HitchinPair {
    pub fn new(varpi: KForm, a: OneOneTensor) -> Result<Self, GcpsError> {
        varpi.chart().ensure_same(a.chart())?;
        check_degree("ϖ", varpi.degree())?;
        if !varpi.d().is_zero() {
            return Err(GcpsError::NotClosed { what: "ϖ" });
        }
        let w = flat_matrix(&varpi);
        if w.determinant().is_zero() {
            return Err(GcpsError::Degenerate { what: "ϖ" });
        }
        let am = a.matrix();
        if let Some((row, col)) = w.mul(am).sub(&am.transpose().mul(&w)).first_nonzero() {
            return Err(GcpsError::Compatibility {
                condition: SIGMA_COMPATIBLE,
                row,
                col,
            });
        }
        let wa = KForm::from_matrix(varpi.chart(), &am.transpose().mul(&varpi.to_matrix()));
        if !wa.d().is_zero() {
            return Err(GcpsError::NotClosed { what: "ϖ_A" });
        }
        Ok(HitchinPair { varpi, a })
    }

    pub fn varpi(&self) -> &KForm {
        &self.varpi
    }

    pub fn a(&self) -> &OneOneTensor {
        &self.a
    }
}

/// Exact inverse through the adjugate.
pub(crate) fn invert(m: &Matrix<Rf>) -> Option<Matrix<Rf>> {
    let det = m.determinant();
    if det.is_zero() {
        return None;
    }
    Some(m.adjugate().scale(&(Rf::one() / det)))
}

/// `♯π = −(♭ϖ)⁻¹`, `♭σ = ♭ϖ∘A² − ε♭ϖ`.
pub fn hitchin_to_gcps(h: &HitchinPair, epsilon: Epsilon) -> Result<Gcps, GcpsError> {
    let c = h.varpi.chart();
    let w = flat_matrix(&h.varpi);
    let p = invert(&w).ok_or(GcpsError::Degenerate { what: "ϖ" })?.neg();
    let a = h.a.matrix();
    let s = w.mul(&a.mul(a)).sub(&w.scale(&epsilon.rf()));
    Gcps::from_matrices(c, epsilon, a.clone(), &p, &s)
}

/// `♭ϖ = −(♯π)⁻¹`; fails on degenerate π and when `(ϖ, A)` is not a
/// Hitchin pair.
pub fn gcps_to_hitchin(g: &Gcps) -> Result<HitchinPair, GcpsError> {
    let w = invert(&g.sharp_matrix())
        .ok_or(GcpsError::DegeneratePi)?
        .neg();
    HitchinPair::new(super::sigma_from_flat(g.chart(), &w), g.a().clone())
}

/// `Φ_W = [[−♯W♭ϖ, −ε♯w − ♯W♭ϖ♯W], [♭ϖ, ♭ϖ♯W]]` with `♯w = −(♭ϖ)⁻¹`.
pub fn phi_from_compatible_pair(
    varpi: &KForm,
    w_big: &KVector,
    epsilon: Epsilon,
) -> Result<Gcps, GcpsError> {
    let c = varpi.chart();
    c.ensure_same(w_big.chart())?;
    check_degree("ϖ", varpi.degree())?;
    check_degree("W", w_big.degree())?;
    if !varpi.d().is_zero() {
        return Err(GcpsError::NotClosed { what: "ϖ" });
    }
    let s = flat_matrix(varpi);
    let sw = invert(&s).ok_or(GcpsError::Degenerate { what: "ϖ" })?.neg();
    let w = super::pi_from_sharp(c, &sw);
    for (what, br) in [
        ("[W,W] = 0", w_big.schouten(w_big)),
        ("[w,W] = 0", w.schouten(w_big)),
    ] {
        if let Some((k, v)) = br.comps().iter().find(|(_, v)| !v.is_zero()) {
            return Err(GcpsError::Precondition {
                what,
                witness: format!("component {k:?} = {v}"),
            });
        }
    }
    let sbig = sharp_matrix(w_big);
    let a = sbig.mul(&s).neg();
    let p = sw.scale(&epsilon.rf()).neg().sub(&sbig.mul(&s).mul(&sbig));
    Gcps::from_matrices(c, epsilon, a, &p, &s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigencheckReport {
    pub points_checked: usize,
    pub sections_checked: usize,
    /// `(point index, frame section index)` of the first mismatch.
    pub failure: Option<(usize, usize)>,
}

impl EigencheckReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// For ε = −1: at each point, `(Id − iΦ_W)s = (♯_{−(W+iw)}ξ, ξ)` for every
/// frame section `s`, over the Gaussian rationals.
pub fn phi_w_eigencheck(
    varpi: &KForm,
    w_big: &KVector,
    points: &[Vec<Rational>],
) -> Result<EigencheckReport, GcpsError> {
    let g = phi_from_compatible_pair(varpi, w_big, Epsilon::Complex)?;
    let c: &Chart = g.chart();
    let n = c.dim();
    let sw = invert(&flat_matrix(varpi))
        .ok_or(GcpsError::Degenerate { what: "ϖ" })?
        .neg();
    let phi = g.to_big_endo();
    let sbig = sharp_matrix(w_big);
    let i = GaussianRational::i();
    let real = |q: &Rational| GaussianRational::real(q.clone());
    let mut failure = None;
    'points: for (pi, p) in points.iter().enumerate() {
        let phi_p = phi.eval_at(p)?.map(real);
        let m = Matrix::identity(2 * n).sub(&phi_p.scale(&i));
        let sharp_l = sbig
            .try_map(|f| f.eval(p))
            .map_err(crate::calculus::CalculusError::from)?
            .map(real)
            .add(
                &sw.try_map(|f| f.eval(p))
                    .map_err(crate::calculus::CalculusError::from)?
                    .map(real)
                    .scale(&i),
            )
            .neg();
        for k in 0..2 * n {
            let v = m.column(k);
            let (vec, cov) = v.split_at(n);
            if sharp_l.mul_vec(cov) != vec {
                failure = Some((pi, k));
                break 'points;
            }
        }
    }
    Ok(EigencheckReport {
        points_checked: points.len(),
        sections_checked: 2 * n,
        failure,
    })
}
