use num_traits::{One, Zero};

use super::{
    constant_rank, fmt_comps, hypothesis, ControlBundle, FoliationSpec, ReductionError,
    SubmanifoldSpec,
};
use crate::calculus::KVector;
use crate::gcps::{sharp_matrix, ConditionReport};
use crate::linalg::{span_coefficients, span_rank, Matrix};
use crate::Rf;

pub const CONTROL_INTERSECTION: &str = "E ∩ TN equals the foliation tangent";
pub const CONTROL_BRACKET: &str = "bracket of controlled functions stays controlled";
pub const CONTROL_SHARP: &str = "♯π(ann E) ⊆ TN + E";

#[derive(Clone, Debug, PartialEq)]
pub struct ControlReport {
    pub a: ConditionReport,
    pub b: ConditionReport,
    pub c: ConditionReport,
    /// Rank of `E` along `N`.
    pub rank: usize,
}

impl ControlReport {
    pub fn passed(&self) -> bool {
        self.a.passed && self.b.passed && self.c.passed
    }

    pub fn conditions(&self) -> [&ConditionReport; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub(crate) fn first_failure(&self) -> Option<&ConditionReport> {
        self.conditions().into_iter().find(|c| !c.passed)
    }
}

fn report(name: &'static str, witness: Option<String>) -> ConditionReport {
    ConditionReport {
        name,
        passed: witness.is_none(),
        witness,
    }
}

/// Which complement of `TN ⊕ E'` a controlled extension vanishes on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Coordinate vectors of the zeroed directions.
    Coordinate,
    /// The same vectors shifted by the sum of the tangent frame.
    Sheared,
}

pub(crate) fn tangent_frame(sub: &SubmanifoldSpec) -> Vec<Vec<Rf>> {
    sub.tangent_indices().iter().map(|&i| sub.unit(i)).collect()
}

pub(crate) fn fiber_frame(fol: &FoliationSpec) -> Vec<Vec<Rf>> {
    fol.fiber_indices()
        .iter()
        .map(|&i| fol.submanifold().unit(i))
        .collect()
}

/// Witness if `T𝓕 ≠ E ∩ TN` for the restricted generators `e`.
pub(crate) fn foliation_mismatch(e: &[Vec<Rf>], fol: &FoliationSpec) -> Option<String> {
    let sub = fol.submanifold();
    let n = sub.chart().dim();
    let rank_e = span_rank(e, n);
    let tf = fiber_frame(fol);
    for (k, v) in tf.iter().enumerate() {
        let mut with = e.to_vec();
        with.push(v.clone());
        if span_rank(&with, n) != rank_e {
            let c = sub.chart().coord(fol.fiber_indices()[k]);
            return Some(format!("fiber direction ∂{c} is not in E"));
        }
    }
    let mut joint = e.to_vec();
    joint.extend(tangent_frame(sub));
    let meet = rank_e + sub.dim() - span_rank(&joint, n);
    if meet != tf.len() {
        return Some(format!(
            "dim(E ∩ TN) = {meet} but the foliation has rank {}",
            tf.len()
        ));
    }
    None
}

/// Checks the three reduction-control conditions for `E` with foliation `fol`.
pub fn control_bundle_check(
    pi: &KVector,
    e: &ControlBundle,
    fol: &FoliationSpec,
) -> Result<ControlReport, ReductionError> {
    let sub = e.submanifold();
    if sub != fol.submanifold() {
        return Err(ReductionError::Definition(
            "control bundle and foliation live on different submanifolds".into(),
        ));
    }
    sub.chart().ensure_same(pi.chart())?;
    let n = sub.chart().dim();
    let gens = e.restricted()?;
    let points = sub.default_sample();
    let rank = constant_rank("E", &gens, n, &points)?;
    let mut joint = gens.clone();
    joint.extend(tangent_frame(sub));
    constant_rank("TN + E", &joint, n, &points)?;

    let a = foliation_mismatch(&gens, fol).or_else(|| {
        points.iter().find_map(|p| {
            let at: Option<Vec<Vec<crate::Rational>>> = gens
                .iter()
                .map(|v| v.iter().map(|f| f.eval(p).ok()).collect())
                .collect();
            let at = at?;
            let rank_e = span_rank(&at, n);
            let mut j = at.clone();
            j.extend(
                tangent_frame(sub)
                    .iter()
                    .map(|v| v.iter().map(|f| f.as_constant().unwrap()).collect()),
            );
            let meet = rank_e + sub.dim() - span_rank(&j, n);
            (meet != fol.fiber_indices().len()).then(|| format!("dim(E ∩ TN) = {meet} at {p:?}"))
        })
    });

    let ann = e.annihilator()?;
    let p = sub.restrict_matrix(&sharp_matrix(pi))?;

    let mut b = None;
    'gen: for (g, z) in e.generators().iter().enumerate() {
        let lz = sub.restrict_matrix(&pi.lie(z).to_matrix())?;
        for (i, l) in ann.iter().enumerate() {
            for m in ann.iter().skip(i + 1) {
                let v = bilinear(&lz, l, m);
                if !v.is_zero() {
                    b = Some(format!(
                        "(L_Z π)({}, {}) = {v} for generator {g}",
                        fmt_comps(sub.chart(), "d", l),
                        fmt_comps(sub.chart(), "d", m)
                    ));
                    break 'gen;
                }
            }
        }
    }

    let c = ann.iter().find_map(|l| {
        let v = p.mul_vec(l);
        span_coefficients(&joint, &v).is_none().then(|| {
            format!(
                "♯π({}) = {} ∉ TN + E",
                fmt_comps(sub.chart(), "d", l),
                fmt_comps(sub.chart(), "∂", &v)
            )
        })
    });

    Ok(ControlReport {
        a: report(CONTROL_INTERSECTION, a),
        b: report(CONTROL_BRACKET, b),
        c: report(CONTROL_SHARP, c),
        rank,
    })
}

pub(crate) fn bilinear(m: &Matrix<Rf>, l: &[Rf], r: &[Rf]) -> Rf {
    let mut acc = Rf::zero();
    for i in 0..l.len() {
        if l[i].is_zero() {
            continue;
        }
        for j in 0..r.len() {
            if !r[j].is_zero() && !m[(i, j)].is_zero() {
                acc = &acc + &(&(&l[i] * &m[(i, j)]) * &r[j]);
            }
        }
    }
    acc
}

/// Generators of `E` completing `TN` to `TN ⊕ E'`, least index first.
fn transverse_part(sub: &SubmanifoldSpec, gens: &[Vec<Rf>]) -> Vec<Vec<Rf>> {
    let n = sub.chart().dim();
    let mut acc = tangent_frame(sub);
    let mut out = Vec::new();
    for g in gens {
        let mut next = acc.clone();
        next.push(g.clone());
        if span_rank(&next, n) > acc.len() {
            acc = next;
            out.push(g.clone());
        }
    }
    out
}

/// The controlled extension of `s*λ` (ambient covector components on
/// `N`) vanishing on `E' ⊕ C`.
pub fn controlled_extension(
    e: &ControlBundle,
    lambda: &[Rf],
    choice: Extension,
) -> Result<Vec<Rf>, ReductionError> {
    let sub = e.submanifold();
    let n = sub.chart().dim();
    let gens = e.restricted()?;
    let e_prime = transverse_part(sub, &gens);
    let mut acc = tangent_frame(sub);
    acc.extend(e_prime.iter().cloned());
    let mut complement = Vec::new();
    for &a in sub.zero_indices() {
        let mut next = acc.clone();
        next.push(sub.unit(a));
        if span_rank(&next, n) > acc.len() {
            acc = next;
            let mut c = sub.unit(a);
            if choice == Extension::Sheared {
                for &t in sub.tangent_indices() {
                    c[t] = Rf::one();
                }
            }
            complement.push(c);
        }
    }
    let zero = sub.zero_indices();
    if e_prime.len() + complement.len() != zero.len() {
        return Err(hypothesis(
            CONTROL_INTERSECTION,
            "E has a component inside TN outside the foliation",
        ));
    }
    // Unknowns: the components of the extension along the zeroed directions.
    let rows: Vec<&Vec<Rf>> = e_prime.iter().chain(complement.iter()).collect();
    let mut m = Matrix::zeros(rows.len(), zero.len());
    let mut rhs = Vec::with_capacity(rows.len());
    for (r, v) in rows.iter().enumerate() {
        for (k, &a) in zero.iter().enumerate() {
            m[(r, k)] = v[a].clone();
        }
        let mut known = Rf::zero();
        for &t in sub.tangent_indices() {
            if !lambda[t].is_zero() && !v[t].is_zero() {
                known = &known + &(&lambda[t] * &v[t]);
            }
        }
        rhs.push(-known);
    }
    let mu = m
        .solve(&rhs)
        .ok_or_else(|| hypothesis(CONTROL_INTERSECTION, "no controlled extension exists"))?;
    let mut out = lambda.to_vec();
    for (k, &a) in zero.iter().enumerate() {
        out[a] = mu[k].clone();
    }
    Ok(out)
}

/// `s_* pr_TN v` for `v ∈ TN + E`, as functions on `Q`.
pub(crate) fn project_vector(
    e: &ControlBundle,
    fol: &FoliationSpec,
    v: &[Rf],
) -> Result<Vec<Rf>, ReductionError> {
    let sub = e.submanifold();
    let mut gens = tangent_frame(sub);
    gens.extend(e.restricted()?);
    let x = span_coefficients(&gens, v).ok_or_else(|| {
        hypothesis(
            CONTROL_SHARP,
            format!("{} ∉ TN + E", fmt_comps(sub.chart(), "∂", v)),
        )
    })?;
    fol.quotient_indices()
        .iter()
        .map(|&q| {
            let k = sub
                .tangent_indices()
                .iter()
                .position(|&t| t == q)
                .expect("quotient lies in N");
            fol.descend(&x[k])
        })
        .collect()
}

/// `(s*)⁻¹ ι*` of a covector on `N`, as functions on `Q`.
pub(crate) fn descend_covector(fol: &FoliationSpec, w: &[Rf]) -> Result<Vec<Rf>, ReductionError> {
    let sub = fol.submanifold();
    if let Some(&f) = fol.fiber_indices().iter().find(|&&f| !w[f].is_zero()) {
        return Err(hypothesis(
            "basic form",
            format!(
                "{} does not vanish on ∂{}",
                fmt_comps(sub.chart(), "d", w),
                sub.chart().coord(f)
            ),
        ));
    }
    fol.quotient_indices()
        .iter()
        .map(|&q| fol.descend(&w[q]))
        .collect()
}

/// `s*λ` of the `i`-th frame covector of `Q`.
pub(crate) fn frame_pullback(fol: &FoliationSpec, i: usize) -> Vec<Rf> {
    fol.submanifold().unit(fol.quotient_indices()[i])
}

fn reduced_sharp(
    pi: &KVector,
    e: &ControlBundle,
    fol: &FoliationSpec,
    choice: Extension,
) -> Result<Matrix<Rf>, ReductionError> {
    let sub = e.submanifold();
    let p = sub.restrict_matrix(&sharp_matrix(pi))?;
    let m = fol.quotient_indices().len();
    let mut cols = Vec::with_capacity(m);
    for i in 0..m {
        let ext = controlled_extension(e, &frame_pullback(fol, i), choice)?;
        cols.push(project_vector(e, fol, &p.mul_vec(&ext))?);
    }
    Ok(Matrix::from_columns(m, &cols))
}

/// The reduced Poisson bivector on the quotient chart.
pub fn poisson_reduce(
    pi: &KVector,
    e: &ControlBundle,
    fol: &FoliationSpec,
) -> Result<KVector, ReductionError> {
    let control = control_bundle_check(pi, e, fol)?;
    if let Some(f) = control.first_failure() {
        return Err(hypothesis(f.name, f.witness.clone().unwrap_or_default()));
    }
    let p = reduced_sharp(pi, e, fol, Extension::Coordinate)?;
    if p != reduced_sharp(pi, e, fol, Extension::Sheared)? {
        return Err(hypothesis(
            "extension independence",
            "two controlled extensions give different brackets",
        ));
    }
    let q = fol.quotient_chart();
    if let Some((r, c)) = crate::gcps::skew_defect(&p) {
        return Err(hypothesis(
            "skew reduced bivector",
            format!("entry ({r},{c})"),
        ));
    }
    let pi_q = crate::gcps::pi_from_sharp(q, &p);
    let jac = pi_q.schouten(&pi_q);
    if !jac.is_zero() {
        return Err(hypothesis(
            "reduced Jacobi identity",
            format!("[π_Q, π_Q] = {jac}"),
        ));
    }
    Ok(pi_q)
}
