use std::fmt;

use rayon::prelude::*;

use crate::calculus::{sharp, KForm, VectorField};
use crate::courant::Twist;

use super::{concomitant_c, Epsilon, Gcps, GcpsError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub name: &'static str,
    pub passed: bool,
    /// Frame arguments and the nonzero residual of the first failure.
    pub witness: Option<String>,
}

impl ConditionReport {
    fn from_first<T: fmt::Display>(name: &'static str, failure: Option<(String, T)>) -> Self {
        ConditionReport {
            name,
            passed: failure.is_none(),
            witness: failure.map(|(args, v)| format!("{args}: {v}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    Integrable,
    NotIntegrable,
    /// All conditions hold for ε = 0; they are necessary only.
    NecessaryConditionsOnly,
}

impl Overall {
    pub fn label(self) -> &'static str {
        match self {
            Overall::Integrable => "integrable",
            Overall::NotIntegrable => "not integrable",
            Overall::NecessaryConditionsOnly => "necessary-conditions-only",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub poisson: ConditionReport,
    pub concomitant: ConditionReport,
    pub nijenhuis: ConditionReport,
    pub associated_form: ConditionReport,
    pub overall: Overall,
    pub twisted: bool,
}

impl IntegrabilityReport {
    pub fn conditions(&self) -> [&ConditionReport; 4] {
        [
            &self.poisson,
            &self.concomitant,
            &self.nijenhuis,
            &self.associated_form,
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.conditions().iter().all(|c| c.passed)
    }
}

pub fn integrability_check(g: &Gcps) -> IntegrabilityReport {
    check(g, None)
}

pub fn twisted_integrability_check(
    g: &Gcps,
    lambda: &KForm,
) -> Result<IntegrabilityReport, GcpsError> {
    g.chart().ensure_same(lambda.chart())?;
    let t = Twist::new(lambda.clone())?;
    Ok(check(g, Some(t.form())))
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
        .collect()
}

fn first_failure<A: Sync, T: Send>(
    args: &[A],
    label: impl Fn(&A) -> String + Sync,
    residual: impl Fn(&A) -> Option<T> + Sync,
) -> Option<(String, T)> {
    let found: Vec<Option<T>> = args.par_iter().map(&residual).collect();
    args.iter()
        .zip(found)
        .find_map(|(a, r)| r.map(|r| (label(a), r)))
}

fn check(g: &Gcps, lambda: Option<&KForm>) -> IntegrabilityReport {
    let ((poisson, concomitant), (nijenhuis, associated_form)) = rayon::join(
        || rayon::join(|| poisson_condition(g), || concomitant_condition(g, lambda)),
        || {
            rayon::join(
                || nijenhuis_condition(g, lambda),
                || associated_form_condition(g, lambda),
            )
        },
    );
    let all = [&poisson, &concomitant, &nijenhuis, &associated_form]
        .iter()
        .all(|c| c.passed);
    let overall = match (all, g.epsilon()) {
        (false, _) => Overall::NotIntegrable,
        (true, Epsilon::Subtangent) => Overall::NecessaryConditionsOnly,
        (true, _) => Overall::Integrable,
    };
    IntegrabilityReport {
        poisson,
        concomitant,
        nijenhuis,
        associated_form,
        overall,
        twisted: lambda.is_some(),
    }
}

fn coord_label(g: &Gcps, prefix: &str, suffix: &str, idx: &[usize]) -> String {
    let parts: Vec<String> = idx
        .iter()
        .map(|&i| format!("{prefix}{}{suffix}", g.chart().coord(i)))
        .collect();
    format!("({})", parts.join(", "))
}

/// `[π,π] = 0`.
fn poisson_condition(g: &Gcps) -> ConditionReport {
    let ppi = g.pi().schouten(g.pi());
    let failure = ppi
        .comps()
        .iter()
        .find(|(_, v)| !num_traits::Zero::is_zero(*v))
        .map(|(k, v)| (coord_label(g, "d", "", k), v.clone()));
    ConditionReport::from_first("poisson bivector", failure)
}

/// `C(α,β) = i(♯πβ)i(♯πα)Λ` on coordinate covector pairs.
fn concomitant_condition(g: &Gcps, lambda: Option<&KForm>) -> ConditionReport {
    let c = g.chart();
    let failure = first_failure(
        &pairs(c.dim()),
        |&(i, j)| coord_label(g, "d", "", &[i, j]),
        |&(i, j)| {
            let (al, be) = (KForm::basis(c, &[i]), KForm::basis(c, &[j]));
            let mut r = concomitant_c(g.pi(), g.a(), &al, &be);
            if let Some(l) = lambda {
                r = r.sub(
                    &l.interior(&sharp(g.pi(), &al))
                        .interior(&sharp(g.pi(), &be)),
                );
            }
            (!r.is_zero()).then_some(r)
        },
    );
    ConditionReport::from_first("schouten concomitant", failure)
}

/// `N_A(X,Y) = ♯π[i(Y)i(X)dσ + i(AY)i(X)Λ − i(AX)i(Y)Λ]` on frame pairs.
fn nijenhuis_condition(g: &Gcps, lambda: Option<&KForm>) -> ConditionReport {
    let c = g.chart();
    let ds = g.sigma().d();
    let failure = first_failure(
        &pairs(c.dim()),
        |&(i, j)| coord_label(g, "", "v", &[i, j]),
        |&(i, j)| {
            let (x, y) = (VectorField::coordinate(c, i), VectorField::coordinate(c, j));
            let mut form = ds.interior(&x).interior(&y);
            if let Some(l) = lambda {
                form = form
                    .add(&l.interior(&x).interior(&g.a().apply(&y)))
                    .sub(&l.interior(&y).interior(&g.a().apply(&x)));
            }
            let r = g.a().nijenhuis(&x, &y).sub(&sharp(g.pi(), &form));
            (!r.is_zero()).then_some(r)
        },
    );
    ConditionReport::from_first("nijenhuis tensor of A", failure)
}

/// `dσ_A − εΛ = Σ_cycl [dσ(AX,Y,Z) + Λ(AX,AY,Z)]` on frame triples.
fn associated_form_condition(g: &Gcps, lambda: Option<&KForm>) -> ConditionReport {
    let c = g.chart();
    let ds = g.sigma().d();
    let dsa = g.sigma_associated().d();
    let eps = g.epsilon().rf();
    let failure = first_failure(
        &triples(c.dim()),
        |&(i, j, k)| coord_label(g, "", "v", &[i, j, k]),
        |&(i, j, k)| {
            let v = [i, j, k].map(|m| VectorField::coordinate(c, m));
            let av = v.clone().map(|x| g.a().apply(&x));
            let mut r = dsa.eval(&[&v[0], &v[1], &v[2]]);
            for s in 0..3 {
                let (x, y, z) = (s, (s + 1) % 3, (s + 2) % 3);
                r = &r - &ds.eval(&[&av[x], &v[y], &v[z]]);
                if let Some(l) = lambda {
                    r = &r - &l.eval(&[&av[x], &av[y], &v[z]]);
                }
            }
            if let Some(l) = lambda {
                r = &r - &(&eps * &l.eval(&[&v[0], &v[1], &v[2]]));
            }
            (!num_traits::Zero::is_zero(&r)).then_some(r)
        },
    );
    ConditionReport::from_first("differential of the associated form", failure)
}
