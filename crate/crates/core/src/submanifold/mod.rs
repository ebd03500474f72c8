//! Induced structures on submanifolds: Poisson–Dirac and quasi-invariance
//! conditions, the induced generalized structure, backward pullbacks of
//! spans and a classification of coordinate-aligned submanifolds.

use num_traits::Zero;

use crate::calculus::{KForm, KVector, OneOneTensor, VectorField};
use crate::courant::{BigSection, SectionSpan};
use crate::gcps::{
    integrability_check, pi_from_sharp, pn_hierarchy_check, sharp_matrix, skew_defect,
    ConditionReport, Epsilon, Gcps, IntegrabilityReport,
};
use crate::linalg::{span_rank, Matrix};
use crate::reduction::{fmt_comps, hypothesis, ReductionError, SubmanifoldSpec};
use crate::sample::{DEFAULT_SAMPLE_COUNT, DEFAULT_SEED};
use crate::{Field, Rational, Rf};

pub const TN_MEETS_PSEUDO_NORMAL: &str = "TN ∩ ♯π(ann TN) = 0";
pub const ANNIHILATORS_SPAN: &str = "ann(ν_πN) + ann TN = T*M";
pub const A_SPLITS: &str = "A(TN) ⊆ TN ⊕ ♯π(ann TN)";
pub const PROJECTION_REGULAR: &str = "dim(TN + im ♯π) constant";

fn report(name: &'static str, witness: Option<String>) -> ConditionReport {
    ConditionReport {
        name,
        passed: witness.is_none(),
        witness,
    }
}

fn units(sub: &SubmanifoldSpec, idx: &[usize]) -> Vec<Vec<Rf>> {
    idx.iter().map(|&i| sub.unit(i)).collect()
}

/// Columns `♯π dx^a`, `a` zeroed, restricted to `N`.
fn pseudo_normal_columns(p: &Matrix<Rf>, sub: &SubmanifoldSpec) -> Vec<Vec<Rf>> {
    sub.zero_indices().iter().map(|&a| p.column(a)).collect()
}

fn ranks_constant(
    what: &'static str,
    vectors: &[Vec<Rf>],
    len: usize,
    points: &[Vec<Rational>],
) -> Result<usize, ReductionError> {
    crate::reduction::constant_rank(what, vectors, len, points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonDiracReport {
    pub intersection: ConditionReport,
    pub annihilators: ConditionReport,
    /// The induced bivector on the chart of `N`, when both conditions hold.
    pub induced: Option<KVector>,
}

impl PoissonDiracReport {
    pub fn passed(&self) -> bool {
        self.intersection.passed && self.annihilators.passed
    }

    /// The two characterizations agree.
    pub fn consistent(&self) -> bool {
        self.intersection.passed == self.annihilators.passed
    }
}

/// A representative `η̃ ≡ dx^t` modulo `ann TN` with `♯πη̃ ∈ TN`.
fn tangent_representative(p: &Matrix<Rf>, sub: &SubmanifoldSpec, t: usize) -> Option<Vec<Rf>> {
    let z = sub.zero_indices();
    let m = Matrix::from_fn(z.len(), z.len(), |r, c| p[(z[r], z[c])].clone());
    let rhs: Vec<Rf> = z.iter().map(|&r| -p[(r, t)].clone()).collect();
    let mu = m.solve(&rhs)?;
    let mut out = sub.unit(t);
    for (k, &a) in z.iter().enumerate() {
        out[a] = mu[k].clone();
    }
    Some(out)
}

pub fn poisson_dirac_check(
    pi: &KVector,
    sub: &SubmanifoldSpec,
) -> Result<PoissonDiracReport, ReductionError> {
    sub.chart().ensure_same(pi.chart())?;
    let n = sub.chart().dim();
    let p = sub.restrict_matrix(&sharp_matrix(pi))?;
    let nu = pseudo_normal_columns(&p, sub);
    let points = sub.default_sample();
    let rank_nu = ranks_constant("ν_πN", &nu, n, &points)?;
    let tn = units(sub, sub.tangent_indices());
    let mut joint = tn.clone();
    joint.extend(nu.iter().cloned());
    let rank_joint = ranks_constant("TN + ν_πN", &joint, n, &points)?;

    let intersection = if sub.dim() + rank_nu == rank_joint {
        None
    } else {
        let kernel = Matrix::from_columns(n, &joint).kernel();
        let w = kernel.iter().find_map(|k| {
            let mut v = vec![Rf::zero(); n];
            for (j, col) in nu.iter().enumerate() {
                let c = &k[sub.dim() + j];
                if !c.is_zero() {
                    for i in 0..n {
                        v[i] = &v[i] + &(c * &col[i]);
                    }
                }
            }
            (!v.iter().all(Rf::is_zero))
                .then(|| format!("{} ∈ TN ∩ ν_πN", fmt_comps(sub.chart(), "∂", &v)))
        });
        Some(w.unwrap_or_else(|| "nonzero intersection".into()))
    };

    let ann_nu = if nu.is_empty() {
        (0..n).map(|i| sub.unit(i)).collect()
    } else {
        Matrix::from_rows(nu.clone()).kernel()
    };
    let mut cov = ann_nu;
    cov.extend(units(sub, sub.zero_indices()));
    let annihilators =
        (span_rank(&cov, n) != n).then(|| format!("the sum has rank {} < {n}", span_rank(&cov, n)));

    let induced = if intersection.is_none() && annihilators.is_none() {
        Some(induced_poisson(&p, sub)?)
    } else {
        None
    };
    Ok(PoissonDiracReport {
        intersection: report(TN_MEETS_PSEUDO_NORMAL, intersection),
        annihilators: report(ANNIHILATORS_SPAN, annihilators),
        induced,
    })
}

/// Sharp matrix of the induced bivector, on the chart of `N`.
fn induced_sharp(p: &Matrix<Rf>, sub: &SubmanifoldSpec) -> Result<Matrix<Rf>, ReductionError> {
    let tan = sub.tangent_indices();
    let mut cols = Vec::with_capacity(tan.len());
    for &t in tan {
        let eta = tangent_representative(p, sub, t).ok_or_else(|| {
            hypothesis(
                ANNIHILATORS_SPAN,
                format!("d{} has no tangent representative", sub.chart().coord(t)),
            )
        })?;
        let v = p.mul_vec(&eta);
        cols.push(tan.iter().map(|&s| v[s].clone()).collect::<Vec<_>>());
    }
    Ok(Matrix::from_columns(tan.len(), &cols))
}

fn induced_poisson(p: &Matrix<Rf>, sub: &SubmanifoldSpec) -> Result<KVector, ReductionError> {
    let ps = induced_sharp(p, sub)?;
    if let Some((r, c)) = skew_defect(&ps) {
        return Err(hypothesis(
            "skew induced bivector",
            format!("entry ({r},{c})"),
        ));
    }
    Ok(pi_from_sharp(sub.induced_chart(), &ps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiInvariantReport {
    pub poisson_dirac: PoissonDiracReport,
    pub splitting: ConditionReport,
    pub regularity: ConditionReport,
}

impl QuasiInvariantReport {
    pub fn passed(&self) -> bool {
        self.poisson_dirac.passed() && self.splitting.passed && self.regularity.passed
    }

    pub fn conditions(&self) -> [&ConditionReport; 4] {
        [
            &self.poisson_dirac.intersection,
            &self.poisson_dirac.annihilators,
            &self.splitting,
            &self.regularity,
        ]
    }
}

/// `(AX − ♯πα_X, α_X)` as ambient components.
type SplitEntry = (Vec<Rf>, Vec<Rf>);

/// `(AX − ♯πα_X, α_X)` per tangent frame field, or the first field whose
/// image leaves `TN ⊕ ♯π(ann TN)`.
fn splitting(
    a: &Matrix<Rf>,
    p: &Matrix<Rf>,
    sub: &SubmanifoldSpec,
) -> Result<Vec<SplitEntry>, String> {
    let n = sub.chart().dim();
    let mut gens = units(sub, sub.tangent_indices());
    gens.extend(pseudo_normal_columns(p, sub));
    let m = Matrix::from_columns(n, &gens);
    let d = sub.dim();
    let mut out = Vec::with_capacity(d);
    for &t in sub.tangent_indices() {
        let ax = a.column(t);
        let x = m.solve(&ax).ok_or_else(|| {
            format!(
                "A∂{} = {} ∉ TN ⊕ ♯π(ann TN)",
                sub.chart().coord(t),
                fmt_comps(sub.chart(), "∂", &ax)
            )
        })?;
        let mut alpha = vec![Rf::zero(); n];
        for (k, &z) in sub.zero_indices().iter().enumerate() {
            alpha[z] = x[d + k].clone();
        }
        let pa = p.mul_vec(&alpha);
        let a_prime: Vec<Rf> = (0..n).map(|i| &ax[i] - &pa[i]).collect();
        out.push((a_prime, alpha));
    }
    Ok(out)
}

pub fn quasi_invariant_check(
    g: &Gcps,
    sub: &SubmanifoldSpec,
) -> Result<QuasiInvariantReport, ReductionError> {
    let poisson_dirac = poisson_dirac_check(g.pi(), sub)?;
    let n = sub.chart().dim();
    let p = sub.restrict_matrix(&g.sharp_matrix())?;
    let a = sub.restrict_matrix(g.a().matrix())?;
    let split = splitting(&a, &p, sub).err();
    let mut joint = units(sub, sub.tangent_indices());
    joint.extend((0..n).map(|j| p.column(j)));
    let regularity = match ranks_constant("TN + im ♯π", &joint, n, &sub.default_sample()) {
        Ok(_) => None,
        Err(ReductionError::RankInconsistent { ranks, .. }) => Some(format!("ranks {ranks:?}")),
        Err(e) => return Err(e),
    };
    Ok(QuasiInvariantReport {
        poisson_dirac,
        splitting: report(A_SPLITS, split),
        regularity: report(PROJECTION_REGULAR, regularity),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedStructure {
    pub gcps: Gcps,
    /// `α_X` for each tangent frame field, as ambient covector components along `N`.
    pub alpha_table: Vec<Vec<Rf>>,
    /// The induced tensors do not change when each `α_X` is shifted by
    /// an element of `ann TN ∩ ker ♯π`.
    pub representative_independent: bool,
    pub integrability: IntegrabilityReport,
    /// Closure of the 0-eigenspan of the induced endomorphism (ε = 0 only).
    pub zero_eigenspan_closed: Option<bool>,
}

fn induced_tensors(
    sub: &SubmanifoldSpec,
    sigma_n: &Matrix<Rf>,
    p: &Matrix<Rf>,
    table: &[(Vec<Rf>, Vec<Rf>)],
) -> (Matrix<Rf>, Matrix<Rf>) {
    let tan = sub.tangent_indices();
    let d = tan.len();
    let a_prime = Matrix::from_fn(d, d, |i, j| table[j].0[tan[i]].clone());
    // σ'(X, Y) = ι*σ(X, Y) − π(α_X, α_Y)
    let s = Matrix::from_fn(d, d, |i, j| {
        let pij = crate::reduction::bilinear(&p.transpose(), &table[i].1, &table[j].1);
        &sigma_n[(i, j)] - &pij
    });
    (a_prime, s)
}

/// The structure induced on a quasi-invariant submanifold.
pub fn induced_structure(
    g: &Gcps,
    sub: &SubmanifoldSpec,
) -> Result<InducedStructure, ReductionError> {
    let check = quasi_invariant_check(g, sub)?;
    if let Some(c) = check.conditions().into_iter().find(|c| !c.passed) {
        return Err(hypothesis(c.name, c.witness.clone().unwrap_or_default()));
    }
    let pi_n = check
        .poisson_dirac
        .induced
        .clone()
        .expect("Poisson–Dirac passed");
    let p = sub.restrict_matrix(&g.sharp_matrix())?;
    let a = sub.restrict_matrix(g.a().matrix())?;
    let table = splitting(&a, &p, sub).map_err(|w| hypothesis(A_SPLITS, w))?;
    let sigma_n = sub.pullback(g.sigma())?.to_matrix();
    let (a_prime, s) = induced_tensors(sub, &sigma_n, &p, &table);

    let n = sub.chart().dim();
    let z = sub.zero_indices();
    let ker: Vec<Vec<Rf>> = Matrix::from_fn(n, z.len(), |r, c| p[(r, z[c])].clone())
        .kernel()
        .into_iter()
        .map(|k| {
            let mut v = vec![Rf::zero(); n];
            for (i, &a) in z.iter().enumerate() {
                v[a] = k[i].clone();
            }
            v
        })
        .collect();
    let representative_independent = match ker.first() {
        None => true,
        Some(gamma) => {
            let shifted: Vec<(Vec<Rf>, Vec<Rf>)> = table
                .iter()
                .enumerate()
                .map(|(k, (ap, alpha))| {
                    let c = Rf::from_int(k as i64 + 1);
                    let alpha2: Vec<Rf> = alpha
                        .iter()
                        .zip(gamma)
                        .map(|(x, y)| x + &(&c * y))
                        .collect();
                    let pa = p.mul_vec(&alpha2);
                    let pa0 = p.mul_vec(alpha);
                    let ap2: Vec<Rf> = (0..n).map(|i| &(&ap[i] + &pa0[i]) - &pa[i]).collect();
                    (ap2, alpha2)
                })
                .collect();
            induced_tensors(sub, &sigma_n, &p, &shifted) == (a_prime.clone(), s.clone())
        }
    };

    let chart = sub.induced_chart();
    let gcps = Gcps::assemble(
        g.epsilon(),
        OneOneTensor::new(chart, a_prime),
        pi_n,
        KForm::from_matrix(chart, &s),
    )?;
    let integrability = integrability_check(&gcps);
    let zero_eigenspan_closed = match g.epsilon() {
        Epsilon::Subtangent => Some(zero_eigenspan_closed(&gcps)?),
        _ => None,
    };
    Ok(InducedStructure {
        alpha_table: table.into_iter().map(|(_, a)| a).collect(),
        gcps,
        representative_independent,
        integrability,
        zero_eigenspan_closed,
    })
}

/// Closure of `ker Φ` under the Courant bracket, for ε = 0.
pub fn zero_eigenspan_closed(g: &Gcps) -> Result<bool, ReductionError> {
    let c = g.chart();
    let n = c.dim();
    let kernel = g.to_big_endo().matrix().kernel();
    if kernel.is_empty() {
        return Ok(true);
    }
    let gens: Vec<BigSection> = kernel
        .iter()
        .map(|k| {
            BigSection::new(
                VectorField::new(c, k[..n].to_vec()),
                KForm::covector(c, &k[n..]),
            )
        })
        .collect();
    let rank = gens.len();
    let span = SectionSpan::new(gens, rank);
    let points = span.sample_points(DEFAULT_SEED, DEFAULT_SAMPLE_COUNT);
    Ok(span
        .closure_check(&points, None)
        .map_err(|e| hypothesis("0-eigenspan closure", e.to_string()))?
        .closed)
}

/// `ι*L` at a point: pairs `(X, α|TN)` with `(X, α) ∈ L`, `X ∈ TN`.
#[derive(Clone, Debug, PartialEq)]
pub struct BackwardPullback<F> {
    /// Basis vectors of length `2·dim N`, vector part first.
    pub basis: Vec<Vec<F>>,
    pub isotropic: bool,
}

/// Backward pullback of the span of `gens` (ambient big vectors at a point of `N`).
pub fn backward_pullback_at<F: Field>(
    gens: &[Vec<F>],
    sub: &SubmanifoldSpec,
) -> BackwardPullback<F> {
    let n = sub.chart().dim();
    let z = sub.zero_indices();
    let tan = sub.tangent_indices();
    let d = tan.len();
    let restrict = |v: &[F]| -> Vec<F> {
        tan.iter()
            .map(|&t| v[t].clone())
            .chain(tan.iter().map(|&t| v[n + t].clone()))
            .collect()
    };
    let candidates: Vec<Vec<F>> = if z.is_empty() {
        gens.iter().map(|g| restrict(g)).collect()
    } else {
        let m = Matrix::from_fn(z.len(), gens.len(), |r, k| gens[k][z[r]].clone());
        m.kernel()
            .into_iter()
            .map(|c| {
                let mut v = vec![F::zero(); 2 * n];
                for (k, g) in gens.iter().enumerate() {
                    if !c[k].is_zero() {
                        for i in 0..2 * n {
                            v[i] = v[i].clone() + c[k].clone() * g[i].clone();
                        }
                    }
                }
                restrict(&v)
            })
            .collect()
    };
    let basis = crate::linalg::prune_to_basis(&candidates, 2 * d);
    let pair = |u: &[F], v: &[F]| -> F {
        let mut acc = F::zero();
        for i in 0..d {
            acc = acc + u[d + i].clone() * v[i].clone() + v[d + i].clone() * u[i].clone();
        }
        acc
    };
    let isotropic = basis
        .iter()
        .enumerate()
        .all(|(i, u)| basis[i..].iter().all(|v| pair(u, v).is_zero()));
    BackwardPullback { basis, isotropic }
}

/// Backward pullback of a span at a point of `N` given in induced coordinates.
pub fn backward_pullback(
    span: &SectionSpan,
    sub: &SubmanifoldSpec,
    point: &[Rational],
) -> Result<BackwardPullback<Rational>, ReductionError> {
    sub.chart().ensure_same(span.chart())?;
    let ambient = sub.embed_point(point);
    let gens: Vec<Vec<Rational>> = span
        .generators
        .iter()
        .map(|g| g.eval_at(&ambient))
        .collect::<Result<_, _>>()
        .map_err(|e| hypothesis("non-singular point", e.to_string()))?;
    Ok(backward_pullback_at(&gens, sub))
}

/// Same-span test for two lists of vectors.
pub fn same_span<F: Field>(a: &[Vec<F>], b: &[Vec<F>], len: usize) -> bool {
    let ra = span_rank(a, len);
    let mut joint = a.to_vec();
    joint.extend(b.iter().cloned());
    ra == span_rank(b, len) && ra == span_rank(&joint, len)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub invariant: ConditionReport,
    pub poisson_dirac: bool,
    pub quasi_invariant: bool,
    /// Present when a normal frame was supplied.
    pub split: Option<ConditionReport>,
    pub poisson_nijenhuis_ambient: bool,
    pub pn_submanifold: bool,
    /// `♯π'_k = A'^k ♯π'` agrees with the restriction of the ambient
    /// hierarchy for `k ≤ 3`; only for PN submanifolds.
    pub hierarchy_matches: Option<bool>,
    /// Vanishing Nijenhuis tensor of the induced `A'`; data, not a criterion.
    pub induced_nijenhuis_zero: Option<bool>,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        if self.split.as_ref().is_some_and(|s| s.passed) {
            "split"
        } else if self.pn_submanifold {
            "poisson-nijenhuis"
        } else if self.invariant.passed && self.poisson_dirac {
            "invariant"
        } else if self.quasi_invariant {
            "quasi-invariant"
        } else if self.poisson_dirac {
            "poisson-dirac"
        } else {
            "none"
        }
    }
}

pub const INVARIANT: &str = "A(TN) ⊆ TN";
pub const SPLIT: &str = "A-invariant σ-orthogonal normal bundle";

/// Flags for `N` with an optional normal frame of coordinate directions.
pub fn classify_submanifold<S: AsRef<str>>(
    g: &Gcps,
    sub: &SubmanifoldSpec,
    normal: Option<&[S]>,
) -> Result<Classification, ReductionError> {
    let c = sub.chart();
    let a = sub.restrict_matrix(g.a().matrix())?;
    let inv_witness = sub.tangent_indices().iter().find_map(|&t| {
        sub.zero_indices()
            .iter()
            .find(|&&z| !a[(z, t)].is_zero())
            .map(|&z| format!("A∂{} has {} along ∂{}", c.coord(t), a[(z, t)], c.coord(z)))
    });
    let invariant = report(INVARIANT, inv_witness);
    let qi = quasi_invariant_check(g, sub)?;
    let poisson_dirac = qi.poisson_dirac.passed();
    let quasi_invariant = qi.passed();

    let split = match normal {
        None => None,
        Some(names) => {
            let mut idx = Vec::new();
            for s in names {
                idx.push(c.index_of(s.as_ref()).ok_or_else(|| {
                    ReductionError::Definition(format!("unknown coordinate {}", s.as_ref()))
                })?);
            }
            idx.sort_unstable();
            if idx != sub.zero_indices() {
                return Err(ReductionError::Definition(
                    "the normal frame must be the zeroed coordinate directions".into(),
                ));
            }
            let mut w = if !invariant.passed {
                invariant.witness.clone()
            } else if !poisson_dirac {
                Some("not Poisson–Dirac".into())
            } else {
                None
            };
            if w.is_none() {
                w = idx.iter().find_map(|&v| {
                    sub.tangent_indices()
                        .iter()
                        .find(|&&t| !a[(t, v)].is_zero())
                        .map(|&t| {
                            format!("A∂{} has {} along ∂{}", c.coord(v), a[(t, v)], c.coord(t))
                        })
                });
            }
            if w.is_none() {
                let s = sub.restrict_matrix(&g.sigma().to_matrix()).ok();
                w = s.and_then(|s| {
                    sub.tangent_indices().iter().find_map(|&t| {
                        idx.iter().find(|&&v| !s[(t, v)].is_zero()).map(|&v| {
                            format!("σ(∂{}, ∂{}) = {}", c.coord(t), c.coord(v), s[(t, v)])
                        })
                    })
                });
            }
            Some(report(SPLIT, w))
        }
    };

    let pn = pn_hierarchy_check(g.pi(), g.a(), 3)
        .map(|h| h.poisson_nijenhuis)
        .unwrap_or(false);
    let pn_submanifold = pn && invariant.passed && poisson_dirac;
    let hierarchy_matches = if pn_submanifold {
        Some(hierarchy_restricts(g, sub)?)
    } else {
        None
    };
    let induced_nijenhuis_zero = if quasi_invariant {
        let ind = induced_structure(g, sub)?;
        Some(
            ind.gcps
                .a()
                .nijenhuis_table()
                .iter()
                .all(|(_, v)| v.is_zero()),
        )
    } else {
        None
    };
    Ok(Classification {
        invariant,
        poisson_dirac,
        quasi_invariant,
        split,
        poisson_nijenhuis_ambient: pn,
        pn_submanifold,
        hierarchy_matches,
        induced_nijenhuis_zero,
    })
}

/// `A^k ♯π η̃` restricted to `TN` equals `A'^k ♯π' [η]` for `k ≤ 3`.
fn hierarchy_restricts(g: &Gcps, sub: &SubmanifoldSpec) -> Result<bool, ReductionError> {
    let p = sub.restrict_matrix(&g.sharp_matrix())?;
    let a = sub.restrict_matrix(g.a().matrix())?;
    let ps = induced_sharp(&p, sub)?;
    let tan = sub.tangent_indices();
    let d = tan.len();
    let a_prime = Matrix::from_fn(d, d, |i, j| a[(tan[i], tan[j])].clone());
    let mut ak = Matrix::identity(sub.chart().dim());
    let mut apk = Matrix::identity(d);
    for _ in 1..=3 {
        ak = a.mul(&ak);
        apk = a_prime.mul(&apk);
        let lhs = apk.mul(&ps);
        for (j, &t) in tan.iter().enumerate() {
            let eta = tangent_representative(&p, sub, t).expect("Poisson–Dirac");
            let v = ak.mul_vec(&p.mul_vec(&eta));
            if sub.zero_indices().iter().any(|&z| !v[z].is_zero()) {
                return Ok(false);
            }
            if (0..d).any(|i| lhs[(i, j)] != v[tan[i]]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
