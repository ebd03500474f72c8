use num_traits::Zero;

use super::control::{
    bilinear, control_bundle_check, controlled_extension, descend_covector, foliation_mismatch,
    frame_pullback, project_vector, tangent_frame, ControlReport, Extension,
};
use super::{
    constant_rank, fmt_comps, hypothesis, ControlBundle, FoliationSpec, ReductionError,
    SubmanifoldSpec,
};
use crate::calculus::{KForm, KVector, OneOneTensor, VectorField};
use crate::gcps::{
    hitchin_to_gcps, integrability_check, sharp_matrix, Epsilon, Gcps, HitchinPair,
    IntegrabilityReport,
};
use crate::linalg::{prune_to_basis, span_rank, Matrix};
use crate::Rf;

pub const HYP_SHARP_INTO_TN: &str = "♯π(ann E) ⊆ TN";
pub const HYP_A_INVARIANT: &str = "A(TN) ⊆ TN";
pub const HYP_A_PRESERVES_E: &str = "A(E) ⊆ E";
pub const HYP_A_PROJECTABLE: &str = "A projectable";
pub const HYP_SIGMA_BASIC: &str = "ι*(i(Z)σ) = 0";
pub const HYP_DSIGMA_BASIC: &str = "ι*(i(Z)dσ) = 0";
pub const HYP_SIGMA_A: &str = "ι*σ_A = 0";
pub const HYP_DSIGMA: &str = "ι*dσ = 0";
pub const HYP_FOLIATION: &str = "foliation matches";
pub const HYP_LIE_FIRST: &str = "(L_{AX}π) vanishes on ann E";
pub const HYP_RANK_VARPI: &str = "rank ι*ϖ constant";

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult {
    pub reduced: Gcps,
    pub control: ControlReport,
    /// The reduced big endomorphism computed directly from `Φ` agrees
    /// with the assembled reduced structure.
    pub direct_formula_agrees: bool,
    pub integrability: IntegrabilityReport,
    /// `(L_{♯πα}π)` on `ann E` for `α ∈ ann TN`; only for the enlarged image.
    pub second_lie_condition: Option<bool>,
}

/// Restricted matrix of `A` along `N`.
fn a_on_n(g: &Gcps, sub: &SubmanifoldSpec) -> Result<Matrix<Rf>, ReductionError> {
    Ok(sub.restrict_matrix(g.a().matrix())?)
}

fn check_a_invariant(a: &Matrix<Rf>, sub: &SubmanifoldSpec) -> Result<(), ReductionError> {
    for &t in sub.tangent_indices() {
        for &z in sub.zero_indices() {
            if !a[(z, t)].is_zero() {
                let c = sub.chart();
                return Err(hypothesis(
                    HYP_A_INVARIANT,
                    format!("A∂{} has {} along ∂{}", c.coord(t), a[(z, t)], c.coord(z)),
                ));
            }
        }
    }
    Ok(())
}

/// Matrix of `A_Q` as functions on `Q`.
fn projected_a(a: &Matrix<Rf>, fol: &FoliationSpec) -> Result<Matrix<Rf>, ReductionError> {
    let q = fol.quotient_indices();
    let mut out = Matrix::zeros(q.len(), q.len());
    for (j, &qj) in q.iter().enumerate() {
        for (i, &qi) in q.iter().enumerate() {
            out[(i, j)] = fol.descend(&a[(qi, qj)]).map_err(|_| {
                hypothesis(
                    HYP_A_PROJECTABLE,
                    format!(
                        "the ∂{} component of A∂{} varies along the fibers",
                        fol.quotient_chart().coord(i),
                        fol.quotient_chart().coord(j)
                    ),
                )
            })?;
        }
    }
    Ok(out)
}

/// `s*ω_Q = ι*ω` solved for `ω_Q`.
fn descend_form(
    fol: &FoliationSpec,
    w: &KForm,
    what: &'static str,
) -> Result<KForm, ReductionError> {
    let sub = fol.submanifold();
    let pulled = sub.pullback(w)?;
    let fiber_local: Vec<usize> = fol
        .fiber_indices()
        .iter()
        .map(|f| {
            sub.tangent_indices()
                .iter()
                .position(|t| t == f)
                .expect("fiber lies in N")
        })
        .collect();
    if let Some((idx, c)) = pulled
        .comps()
        .iter()
        .find(|(idx, c)| idx.iter().any(|i| fiber_local.contains(i)) && !c.is_zero())
    {
        let names: Vec<&str> = idx.iter().map(|&i| sub.induced_chart().coord(i)).collect();
        return Err(hypothesis(
            what,
            format!("component {names:?} = {c} along a fiber"),
        ));
    }
    let map: Vec<Option<usize>> = sub
        .tangent_indices()
        .iter()
        .map(|t| fol.quotient_indices().iter().position(|q| q == t))
        .collect();
    let mut entries = Vec::new();
    for (idx, c) in pulled.comps() {
        let mapped: Vec<usize> = idx.iter().filter_map(|&i| map[i]).collect();
        if mapped.len() == idx.len() {
            let v = fol.descend(c).map_err(|e| match e {
                ReductionError::Hypothesis { witness, .. } => hypothesis(what, witness),
                e => e,
            })?;
            entries.push((mapped, v));
        }
    }
    Ok(KForm::from_components(
        fol.quotient_chart(),
        w.degree(),
        entries,
    ))
}

/// Reduction of `G` via the control bundle `E` onto the leaf space of `fol`.
pub fn gcps_reduce(
    g: &Gcps,
    e: &ControlBundle,
    fol: &FoliationSpec,
) -> Result<ReductionResult, ReductionError> {
    let sub = e.submanifold();
    sub.chart().ensure_same(g.chart())?;
    let control = control_bundle_check(g.pi(), e, fol)?;
    if let Some(f) = control.first_failure() {
        return Err(hypothesis(f.name, f.witness.clone().unwrap_or_default()));
    }
    let n = sub.chart().dim();
    let p = sub.restrict_matrix(&g.sharp_matrix())?;
    let gens = e.restricted()?;

    for l in e.annihilator()? {
        let v = p.mul_vec(&l);
        if sub.zero_indices().iter().any(|&z| !v[z].is_zero()) {
            return Err(hypothesis(
                HYP_SHARP_INTO_TN,
                format!(
                    "♯π({}) = {}",
                    fmt_comps(sub.chart(), "d", &l),
                    fmt_comps(sub.chart(), "∂", &v)
                ),
            ));
        }
    }

    let a = a_on_n(g, sub)?;
    check_a_invariant(&a, sub)?;
    let rank_e = span_rank(&gens, n);
    for (k, z) in gens.iter().enumerate() {
        let mut with = gens.clone();
        with.push(a.mul_vec(z));
        if span_rank(&with, n) != rank_e {
            return Err(hypothesis(
                HYP_A_PRESERVES_E,
                format!("A maps generator {k} outside E"),
            ));
        }
    }
    let a_q = projected_a(&a, fol)?;

    let dsigma = g.sigma().d();
    for (k, z) in e.generators().iter().enumerate() {
        let iz = g.sigma().interior(z);
        if !sub.pullback(&iz)?.is_zero() {
            return Err(hypothesis(HYP_SIGMA_BASIC, format!("generator {k}")));
        }
        let izd = dsigma.interior(z);
        if !sub.pullback(&izd)?.is_zero() {
            return Err(hypothesis(HYP_DSIGMA_BASIC, format!("generator {k}")));
        }
    }

    let pi_q = super::poisson_reduce(g.pi(), e, fol)?;
    let sigma_q = descend_form(fol, g.sigma(), HYP_SIGMA_BASIC)?;
    let q = fol.quotient_chart();
    let reduced = Gcps::assemble(g.epsilon(), OneOneTensor::new(q, a_q), pi_q, sigma_q)?;
    let direct_formula_agrees = direct_formula(g, e, fol)? == *reduced.to_big_endo().matrix();
    let integrability = integrability_check(&reduced);
    Ok(ReductionResult {
        reduced,
        control,
        direct_formula_agrees,
        integrability,
        second_lie_condition: None,
    })
}

/// The reduced big endomorphism evaluated frame by frame from `Φ`.
fn direct_formula(
    g: &Gcps,
    e: &ControlBundle,
    fol: &FoliationSpec,
) -> Result<Matrix<Rf>, ReductionError> {
    let sub = e.submanifold();
    let phi = sub.restrict_matrix(g.to_big_endo().matrix())?;
    let n = sub.chart().dim();
    let m = fol.quotient_indices().len();
    let mut cols = Vec::with_capacity(2 * m);
    let mut push = |arg: Vec<Rf>| -> Result<(), ReductionError> {
        let out = phi.mul_vec(&arg);
        let mut col = project_vector(e, fol, &out[..n])?;
        let mut cov = vec![Rf::zero(); n];
        for &t in sub.tangent_indices() {
            cov[t] = out[n + t].clone();
        }
        col.extend(descend_covector(fol, &cov)?);
        cols.push(col);
        Ok(())
    };
    for j in 0..m {
        let mut arg = sub.unit(fol.quotient_indices()[j]);
        arg.extend(vec![Rf::zero(); n]);
        push(arg)?;
    }
    for i in 0..m {
        let lam = controlled_extension(e, &frame_pullback(fol, i), Extension::Coordinate)?;
        let mut arg = vec![Rf::zero(); n];
        arg.extend(lam);
        push(arg)?;
    }
    Ok(Matrix::from_columns(2 * m, &cols))
}

/// Pruned ambient generators whose restrictions span `vectors` along `N`.
fn bundle_from(
    sub: &SubmanifoldSpec,
    what: &'static str,
    candidates: Vec<VectorField>,
) -> Result<ControlBundle, ReductionError> {
    let n = sub.chart().dim();
    let restricted: Vec<Vec<Rf>> = candidates
        .iter()
        .map(|v| sub.restrict_vector(v))
        .collect::<Result<_, _>>()?;
    constant_rank(what, &restricted, n, &sub.default_sample())?;
    let basis = prune_to_basis(&restricted, n);
    let kept = candidates
        .into_iter()
        .zip(&restricted)
        .filter(|(_, r)| basis.contains(r))
        .map(|(c, _)| c);
    let mut out = Vec::new();
    let mut seen: Vec<Vec<Rf>> = Vec::new();
    for (c, r) in kept.zip(restricted.iter().filter(|r| basis.contains(r))) {
        if !seen.contains(r) {
            seen.push(r.clone());
            out.push(c);
        }
    }
    ControlBundle::new(sub, out)
}

fn sharp_of_annihilator(pi: &KVector, sub: &SubmanifoldSpec) -> Vec<VectorField> {
    let p = sharp_matrix(pi);
    sub.zero_indices()
        .iter()
        .map(|&a| VectorField::new(sub.chart(), p.column(a)))
        .collect()
}

/// `A(TN) + ♯π(ann TN)` along `N`.
pub fn enlarged_image(g: &Gcps, sub: &SubmanifoldSpec) -> Result<ControlBundle, ReductionError> {
    sub.chart().ensure_same(g.chart())?;
    let a = g.a().matrix();
    let mut candidates: Vec<VectorField> = sub
        .tangent_indices()
        .iter()
        .map(|&t| VectorField::new(sub.chart(), a.column(t)))
        .collect();
    candidates.extend(sharp_of_annihilator(g.pi(), sub));
    bundle_from(sub, "enlarged image", candidates)
}

/// `♯π(ann TN)` along `N`.
pub fn pseudo_normal(pi: &KVector, sub: &SubmanifoldSpec) -> Result<ControlBundle, ReductionError> {
    sub.chart().ensure_same(pi.chart())?;
    bundle_from(sub, "pseudo-normal field", sharp_of_annihilator(pi, sub))
}

/// Rank of `E ∩ TN` checked constant across the sample points.
fn check_meet_rank(e: &ControlBundle) -> Result<(), ReductionError> {
    let sub = e.submanifold();
    let mut joint = e.restricted()?;
    joint.extend(tangent_frame(sub));
    constant_rank("TN + E", &joint, sub.chart().dim(), &sub.default_sample())?;
    Ok(())
}

fn check_foliation(e: &ControlBundle, fol: &FoliationSpec) -> Result<(), ReductionError> {
    match foliation_mismatch(&e.restricted()?, fol) {
        Some(w) => Err(hypothesis(HYP_FOLIATION, w)),
        None => Ok(()),
    }
}

/// Vanishing of `(L_Z π)` on `ann E` for each `Z`; the first nonzero value.
fn lie_on_annihilator(
    pi: &KVector,
    e: &ControlBundle,
    fields: &[VectorField],
) -> Result<Option<String>, ReductionError> {
    let sub = e.submanifold();
    let ann = e.annihilator()?;
    for z in fields {
        let lz = sub.restrict_matrix(&pi.lie(z).to_matrix())?;
        for (i, l) in ann.iter().enumerate() {
            for m in ann.iter().skip(i + 1) {
                let v = bilinear(&lz, l, m);
                if !v.is_zero() {
                    return Ok(Some(format!("along {z}: value {v}")));
                }
            }
        }
    }
    Ok(None)
}

/// Reduction via the enlarged image field.
pub fn reduce_via_enlarged(
    g: &Gcps,
    sub: &SubmanifoldSpec,
    fol: &FoliationSpec,
) -> Result<ReductionResult, ReductionError> {
    check_a_invariant(&a_on_n(g, sub)?, sub)?;
    let e = enlarged_image(g, sub)?;
    check_meet_rank(&e)?;
    if !sub.pullback(&g.sigma_associated())?.is_zero() {
        return Err(hypothesis(HYP_SIGMA_A, "the pullback of σ_A is nonzero"));
    }
    if !sub.pullback(&g.sigma().d())?.is_zero() {
        return Err(hypothesis(HYP_DSIGMA, "the pullback of dσ is nonzero"));
    }
    check_foliation(&e, fol)?;
    let a = g.a().matrix();
    let ax: Vec<VectorField> = sub
        .tangent_indices()
        .iter()
        .map(|&t| VectorField::new(sub.chart(), a.column(t)))
        .collect();
    if let Some(w) = lie_on_annihilator(g.pi(), &e, &ax)? {
        return Err(hypothesis(HYP_LIE_FIRST, w));
    }
    let second = lie_on_annihilator(g.pi(), &e, &sharp_of_annihilator(g.pi(), sub))?.is_none();
    let mut out = gcps_reduce(g, &e, fol)?;
    out.second_lie_condition = Some(second);
    Ok(out)
}

/// Reduction via the pseudo-normal field.
pub fn reduce_via_pseudonormal(
    g: &Gcps,
    sub: &SubmanifoldSpec,
    fol: &FoliationSpec,
) -> Result<ReductionResult, ReductionError> {
    check_a_invariant(&a_on_n(g, sub)?, sub)?;
    let e = pseudo_normal(g.pi(), sub)?;
    check_meet_rank(&e)?;
    check_foliation(&e, fol)?;
    gcps_reduce(g, &e, fol)
}

/// Reduction of a Hitchin pair onto the leaf space of `ν_πN ∩ TN`.
pub fn hitchin_reduce(
    h: &HitchinPair,
    sub: &SubmanifoldSpec,
    fol: &FoliationSpec,
) -> Result<HitchinPair, ReductionError> {
    sub.chart().ensure_same(h.varpi().chart())?;
    let pulled = sub.pullback(h.varpi())?;
    let rows: Vec<Vec<Rf>> = (0..sub.dim())
        .map(|i| pulled.to_matrix().row(i).to_vec())
        .collect();
    constant_rank(HYP_RANK_VARPI, &rows, sub.dim(), &sub.default_sample())?;
    let a = sub.restrict_matrix(h.a().matrix())?;
    check_a_invariant(&a, sub)?;
    let pi = hitchin_to_gcps(h, Epsilon::Paracomplex)?.pi().clone();
    let e = pseudo_normal(&pi, sub)?;
    check_meet_rank(&e)?;
    check_foliation(&e, fol)?;
    let a_q = projected_a(&a, fol)?;
    let varpi_q = descend_form(fol, h.varpi(), "ι*ϖ basic")?;
    Ok(HitchinPair::new(
        varpi_q,
        OneOneTensor::new(fol.quotient_chart(), a_q),
    )?)
}

/// A translation symmetry with momentum `J = x^m` and orbits the lines of
/// `x^o`, reduced at the level set `J = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumReport {
    /// `J_* ∘ A = J_*`.
    pub momentum_condition: bool,
    /// `A` preserves the tangent bundle of the level set.
    pub level_set_invariant: bool,
    /// `♯π dJ` is a nonzero multiple of `∂x^o` along the level set.
    pub orbits_match: bool,
    pub result: ReductionResult,
}

pub fn translation_momentum_reduction(
    g: &Gcps,
    momentum: &str,
    orbit: &str,
) -> Result<MomentumReport, ReductionError> {
    let c = g.chart();
    let sub = SubmanifoldSpec::new(c, &[momentum])?;
    let fol = FoliationSpec::new(&sub, &[orbit])?;
    let m = sub.zero_indices()[0];
    let o = fol.fiber_indices()[0];
    let a = g.a().matrix();
    let momentum_condition = (0..c.dim()).all(|j| {
        let want = if j == m { Rf::from_int(1) } else { Rf::zero() };
        a[(m, j)] == want
    });
    let level_set_invariant = check_a_invariant(&a_on_n(g, &sub)?, &sub).is_ok();
    let v = sub.restrict_comps(&sharp_matrix(g.pi()).column(m))?;
    let orbits_match = !v[o].is_zero() && v.iter().enumerate().all(|(i, f)| i == o || f.is_zero());
    let result = reduce_via_pseudonormal(g, &sub, &fol)?;
    Ok(MomentumReport {
        momentum_condition,
        level_set_invariant,
        orbits_match,
        result,
    })
}
