use rayon::prelude::*;

use crate::calculus::{
    one_form_bracket, sharp, CalculusError, KForm, KVector, OneOneTensor, VectorField,
};
use crate::Rf;

use super::{pi_from_sharp, sharp_matrix, skew_defect, GcpsError};

/// `C(α,β) = β∘L_{♯πα}A − α∘L_{♯πβ}A + d(π(α,β))∘A − d(π(α∘A,β))`.
pub fn concomitant_c(pi: &KVector, a: &OneOneTensor, alpha: &KForm, beta: &KForm) -> KForm {
    let c = pi.chart();
    let sa = sharp(pi, alpha);
    let sb = sharp(pi, beta);
    let pab = pi.eval(&[alpha, beta]);
    let paab = pi.eval(&[&a.apply_form(alpha), beta]);
    a.lie(&sa)
        .apply_form(beta)
        .sub(&a.lie(&sb).apply_form(alpha))
        .add(&a.apply_form(&KForm::differential(c, &pab)))
        .sub(&KForm::differential(c, &paab))
}

/// Values keyed by index pairs.
pub type PairTable<T> = Vec<((usize, usize), T)>;

/// `C` on coordinate covector pairs `(dx^i, dx^j)`, `i < j`.
pub fn schouten_concomitant(
    pi: &KVector,
    a: &OneOneTensor,
) -> Result<PairTable<KForm>, CalculusError> {
    pi.chart().ensure_same(a.chart())?;
    let n = pi.chart().dim();
    let frame: Vec<KForm> = (0..n).map(|i| KForm::basis(pi.chart(), &[i])).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(i, j)| ((i, j), concomitant_c(pi, a, &frame[i], &frame[j])))
        .collect())
}

/// `R(α,X) = ♯π(L_X(α∘A)) − (L_{♯πα}A)(X) − ♯π(L_{AX}α)`.
pub fn concomitant_r(
    pi: &KVector,
    a: &OneOneTensor,
    alpha: &KForm,
    x: &VectorField,
) -> VectorField {
    sharp(pi, &a.apply_form(alpha).lie(x))
        .sub(&a.lie(&sharp(pi, alpha)).apply(x))
        .sub(&sharp(pi, &alpha.lie(&a.apply(x))))
}

/// `R` on `(dx^i, ∂_j)` for all `i, j`.
pub fn concomitant_r_table(
    pi: &KVector,
    a: &OneOneTensor,
) -> Result<PairTable<VectorField>, CalculusError> {
    pi.chart().ensure_same(a.chart())?;
    let c = pi.chart();
    let n = c.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    Ok(pairs
        .par_iter()
        .map(|&(i, j)| {
            (
                (i, j),
                concomitant_r(
                    pi,
                    a,
                    &KForm::basis(c, &[i]),
                    &VectorField::coordinate(c, j),
                ),
            )
        })
        .collect())
}

/// `{α,β}_π∘A − L_{♯πα}(β∘A) + L_{♯πβ}(α∘A) + d(π(α∘A,β))`, which equals
/// `−C(α,β)` identically.
pub fn bracket_form_residual(pi: &KVector, a: &OneOneTensor, alpha: &KForm, beta: &KForm) -> KForm {
    let c = pi.chart();
    a.apply_form(&one_form_bracket(pi, alpha, beta))
        .sub(&a.apply_form(beta).lie(&sharp(pi, alpha)))
        .add(&a.apply_form(alpha).lie(&sharp(pi, beta)))
        .add(&KForm::differential(
            c,
            &pi.eval(&[&a.apply_form(alpha), beta]),
        ))
}

/// The covector `X ↦ σ(X, V)`.
fn compose_flat(v: &VectorField, sigma: &KForm) -> KForm {
    sigma.interior(v).neg()
}

/// `C_{(π, ♯π∘♭σ)}(α,β) − i(♯πβ)i(♯πα)dσ + ½ σ(·, i(β)i(α)[π,π])` on
/// coordinate covector pairs. The identity makes every entry vanish.
pub fn magri_residual(pi: &KVector, sigma: &KForm) -> Result<PairTable<KForm>, CalculusError> {
    pi.chart().ensure_same(sigma.chart())?;
    let c = pi.chart();
    let n = c.dim();
    let ps = OneOneTensor::new(c, sharp_matrix(pi).mul(&super::flat_matrix(sigma)));
    let ds = sigma.d();
    let ppi = pi.schouten(pi);
    let half = Rf::constant(crate::Rational::new(1.into(), 2.into()));
    let frame: Vec<KForm> = (0..n).map(|i| KForm::basis(c, &[i])).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(i, j)| {
            let (al, be) = (&frame[i], &frame[j]);
            let lhs = concomitant_c(pi, &ps, al, be);
            let dterm = ds.interior(&sharp(pi, al)).interior(&sharp(pi, be));
            let v = ppi.interior(al).interior(be).to_vector();
            let pterm = compose_flat(&v, sigma).scale(&half);
            ((i, j), lhs.sub(&dterm).add(&pterm))
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct HierarchyReport {
    /// `π_k` with `♯_{π_k} = A^k∘♯π`, for `k = 0..=k_max`.
    pub bivectors: Vec<KVector>,
    /// `(j, k, [π_j, π_k] = 0)` for `j ≤ k`.
    pub brackets: Vec<(usize, usize, bool)>,
    pub all_brackets_zero: bool,
    pub poisson: bool,
    pub nijenhuis: bool,
    pub concomitant_zero: bool,
    pub poisson_nijenhuis: bool,
}

pub fn pn_hierarchy_check(
    pi: &KVector,
    a: &OneOneTensor,
    k_max: usize,
) -> Result<HierarchyReport, GcpsError> {
    pi.chart().ensure_same(a.chart())?;
    let c = pi.chart();
    let p = sharp_matrix(pi);
    let mut bivectors = Vec::with_capacity(k_max + 1);
    let mut pk = p.clone();
    for k in 0..=k_max {
        if let Some((i, j)) = skew_defect(&pk) {
            return Err(GcpsError::Precondition {
                what: "A^k∘♯π is not skew",
                witness: format!("k = {k}, entry ({i}, {j})"),
            });
        }
        bivectors.push(pi_from_sharp(c, &pk));
        pk = a.matrix().mul(&pk);
    }
    let pairs: Vec<(usize, usize)> = (0..=k_max)
        .flat_map(|j| (j..=k_max).map(move |k| (j, k)))
        .collect();
    let brackets: Vec<(usize, usize, bool)> = pairs
        .par_iter()
        .map(|&(j, k)| (j, k, bivectors[j].schouten(&bivectors[k]).is_zero()))
        .collect();
    let all_brackets_zero = brackets.iter().all(|b| b.2);
    let poisson = brackets.first().is_none_or(|b| b.2);
    let nijenhuis = a.nijenhuis_table().iter().all(|(_, v)| v.is_zero());
    let concomitant_zero = schouten_concomitant(pi, a)?
        .iter()
        .all(|(_, f)| f.is_zero());
    Ok(HierarchyReport {
        bivectors,
        brackets,
        all_brackets_zero,
        poisson,
        nijenhuis,
        concomitant_zero,
        poisson_nijenhuis: poisson && nijenhuis && concomitant_zero,
    })
}
