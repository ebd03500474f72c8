//! Execution of resolved tasks.

use gencps::courant::{torsion_frame_report, BigSection, MembershipMode, TorsionReport, Twist};
use gencps::gcps::{
    beta_transform, cps_map_check, gauge_transform, gauge_transform_algebraic, gcps_to_hitchin,
    hitchin_to_gcps, integrability_check, leaf_normal_form, pn_hierarchy_check,
    twisted_integrability_check, Gcps, IntegrabilityReport,
};
use gencps::reduction::{
    gcps_reduce, hitchin_reduce, reduce_via_enlarged, reduce_via_pseudonormal,
    translation_momentum_reduction, ReductionError, ReductionResult,
};
use gencps::sample::DEFAULT_SAMPLE_COUNT;
use gencps::submanifold::{classify_submanifold, induced_structure, quasi_invariant_check};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::model::{Model, Route, Task, TaskKind};
use crate::report::{
    form_json, gcps_json, multivector_json, rational_matrix_json, rationals_json, tensor_json,
    Condition, Report, TaskReport,
};

/// Conditions, data, and an error message when the task could not finish.
struct Outcome {
    conditions: Vec<Condition>,
    data: Value,
    error: Option<String>,
}

impl Outcome {
    fn ok(conditions: Vec<Condition>, data: Value) -> Self {
        Outcome {
            conditions,
            data,
            error: None,
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Outcome {
            conditions: Vec::new(),
            data: Value::Null,
            error: Some(e.to_string()),
        }
    }

    /// A failed hypothesis becomes a failed condition with its witness.
    fn reduction_error(e: ReductionError) -> Self {
        match e {
            ReductionError::Hypothesis { name, witness } => Outcome {
                conditions: vec![Condition::new(name, false, Some(witness))],
                data: Value::Null,
                error: None,
            },
            e => Outcome::error(e),
        }
    }
}

/// Tasks run concurrently; blocks keep document order.
pub fn run(model: &Model, seed: u64) -> Report {
    let tasks = model
        .tasks
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let o = run_task(t, seed);
            TaskReport {
                index: i + 1,
                name: t.name.clone(),
                call: t.call.clone(),
                expect: t.expect,
                outcome: o.error.is_none() && o.conditions.iter().all(|c| c.passed),
                conditions: o.conditions,
                data: o.data,
                error: o.error,
            }
        })
        .collect();
    Report { seed, tasks }
}

fn integrability_conditions(r: &IntegrabilityReport) -> Vec<Condition> {
    r.conditions().iter().map(|c| Condition::from(*c)).collect()
}

fn torsion_json(t: &TorsionReport, g: &Gcps) -> Value {
    let c = g.chart();
    json!({
        "pairs_checked": t.pairs_checked,
        "nonzero": t.nonzero.iter().map(|e| json!({
            "pair": [BigSection::frame_label(c, e.i), BigSection::frame_label(c, e.j)],
            "vector": e.value.vector.to_string(),
            "covector": e.value.covector.to_string(),
        })).collect::<Vec<_>>(),
        "conclusive": t.conclusive,
        "label": t.label,
    })
}

/// Integrability conditions plus agreement with the torsion frame table.
fn check(g: &Gcps, r: IntegrabilityReport, t: TorsionReport) -> Outcome {
    let mut conditions = integrability_conditions(&r);
    conditions.push(Condition::new(
        "torsion frame table agrees with the conditions",
        !t.conclusive || t.all_zero == r.all_pass(),
        (t.conclusive && t.all_zero != r.all_pass())
            .then(|| format!("{} nonzero torsion entries", t.nonzero.len())),
    ));
    Outcome::ok(
        conditions,
        json!({
            "overall": r.overall.label(),
            "twisted": r.twisted,
            "structure": gcps_json(g),
            "torsion": torsion_json(&t, g),
        }),
    )
}

fn reduction(r: Result<ReductionResult, ReductionError>, ambient_integrable: bool) -> Outcome {
    let r = match r {
        Ok(r) => r,
        Err(e) => return Outcome::reduction_error(e),
    };
    let mut conditions: Vec<Condition> = r
        .control
        .conditions()
        .iter()
        .map(|c| Condition::from(*c))
        .collect();
    conditions.push(Condition::flag(
        "direct formula agrees with the assembled structure",
        r.direct_formula_agrees,
    ));
    if let Some(b) = r.second_lie_condition {
        conditions.push(Condition::flag(
            "Lie derivative of π along ♯π(ann TN) vanishes on ann E",
            b,
        ));
    }
    if ambient_integrable {
        conditions.extend(integrability_conditions(&r.integrability));
    }
    Outcome::ok(
        conditions,
        json!({
            "control_rank": r.control.rank,
            "reduced": gcps_json(&r.reduced),
            "reduced_overall": r.integrability.overall.label(),
        }),
    )
}

fn run_task(t: &Task, seed: u64) -> Outcome {
    match &t.kind {
        TaskKind::Check(g) => check(
            g,
            integrability_check(g),
            torsion_frame_report(&g.to_big_endo(), None),
        ),
        TaskKind::TwistedCheck(g, lambda) => {
            let twist = match Twist::new(lambda.clone()) {
                Ok(t) => t,
                Err(e) => return Outcome::error(e),
            };
            match twisted_integrability_check(g, lambda) {
                Ok(r) => check(g, r, torsion_frame_report(&g.to_big_endo(), Some(&twist))),
                Err(e) => Outcome::error(e),
            }
        }
        TaskKind::Gauge(g, b) => {
            let (g2, alg) = match (gauge_transform(g, b), gauge_transform_algebraic(g, b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return Outcome::error(e),
            };
            let before = integrability_check(g).all_pass();
            let after = integrability_check(&g2).all_pass();
            Outcome::ok(
                vec![
                    Condition::flag("conjugation agrees with the block formula", g2 == alg),
                    Condition::flag("bivector unchanged", g2.pi() == g.pi()),
                    Condition::new(
                        "integrability preserved",
                        before == after,
                        (before != after).then(|| format!("before {before}, after {after}")),
                    ),
                ],
                json!({ "transformed": gcps_json(&g2) }),
            )
        }
        TaskKind::Beta(g, beta) => match beta_transform(&g.to_big_endo(), beta) {
            Err(e) => Outcome::error(e),
            Ok(phi) => {
                let skew = phi.skew_witness();
                let potency = phi.potency();
                let assembled = Gcps::from_big_endo(&phi);
                let mut data = json!({ "potency": potency });
                if let Ok(h) = &assembled {
                    data["transformed"] = gcps_json(h);
                    data["overall"] = json!(integrability_check(h).overall.label());
                }
                Outcome::ok(
                    vec![
                        Condition::new(
                            "g-skew",
                            skew.is_none(),
                            skew.map(|(i, j)| format!("entries ({i}, {j})")),
                        ),
                        Condition::flag("square is a multiple of the identity", potency.is_some()),
                        Condition::new(
                            "assembles into a structure",
                            assembled.is_ok(),
                            assembled.as_ref().err().map(ToString::to_string),
                        ),
                    ],
                    data,
                )
            }
        },
        TaskKind::Hitchin(h, eps) => {
            let g = match hitchin_to_gcps(h, *eps) {
                Ok(g) => g,
                Err(e) => return Outcome::error(e),
            };
            let back = gcps_to_hitchin(&g);
            let round = back.as_ref().is_ok_and(|b| b == h);
            let mut conditions = vec![Condition::new(
                "round trip recovers the pair",
                round,
                back.err().map(|e| e.to_string()),
            )];
            let r = integrability_check(&g);
            conditions.extend(integrability_conditions(&r));
            Outcome::ok(
                conditions,
                json!({ "structure": gcps_json(&g), "overall": r.overall.label() }),
            )
        }
        TaskKind::Hierarchy(g, k) => match pn_hierarchy_check(g.pi(), g.a(), *k) {
            Err(e) => Outcome::error(e),
            Ok(r) => Outcome::ok(
                vec![
                    Condition::flag("π is Poisson", r.poisson),
                    Condition::flag("Nijenhuis tensor of A vanishes", r.nijenhuis),
                    Condition::flag("concomitant vanishes", r.concomitant_zero),
                    Condition::new(
                        "hierarchy brackets vanish",
                        r.all_brackets_zero,
                        r.brackets
                            .iter()
                            .find(|b| !b.2)
                            .map(|(j, k, _)| format!("[π_{j}, π_{k}] ≠ 0")),
                    ),
                ],
                json!({ "bivectors": r.bivectors.iter().map(multivector_json).collect::<Vec<_>>() }),
            ),
        },
        TaskKind::Reduce(g, fol, route) => {
            let sub = fol.submanifold();
            let r = match route {
                Route::Bundle(e) => gcps_reduce(g, e, fol),
                Route::Enlarged => reduce_via_enlarged(g, sub, fol),
                Route::PseudoNormal => reduce_via_pseudonormal(g, sub, fol),
            };
            reduction(r, integrability_check(g).all_pass())
        }
        TaskKind::HitchinReduce(h, fol) => match hitchin_reduce(h, fol.submanifold(), fol) {
            Err(e) => Outcome::reduction_error(e),
            Ok(r) => Outcome::ok(
                vec![Condition::flag("reduced pair is a Hitchin pair", true)],
                json!({ "varpi": form_json(r.varpi()), "A": tensor_json(r.a()) }),
            ),
        },
        TaskKind::Momentum(g, m, o) => match translation_momentum_reduction(g, m, o) {
            Err(e) => Outcome::reduction_error(e),
            Ok(r) => Outcome::ok(
                vec![
                    Condition::flag("momentum map intertwines A", r.momentum_condition),
                    Condition::flag("level set is invariant", r.level_set_invariant),
                    Condition::flag("orbits match the foliation", r.orbits_match),
                    Condition::flag(
                        "direct formula agrees with the assembled structure",
                        r.result.direct_formula_agrees,
                    ),
                ],
                json!({ "reduced": gcps_json(&r.result.reduced) }),
            ),
        },
        TaskKind::Induce(g, sub) => {
            let qi = match quasi_invariant_check(g, sub) {
                Ok(q) => q,
                Err(e) => return Outcome::reduction_error(e),
            };
            let mut conditions: Vec<Condition> = qi
                .conditions()
                .iter()
                .map(|c| Condition::from(*c))
                .collect();
            if !qi.passed() {
                return Outcome::ok(conditions, Value::Null);
            }
            let ind = match induced_structure(g, sub) {
                Ok(i) => i,
                Err(e) => return Outcome::reduction_error(e),
            };
            conditions.push(Condition::flag(
                "independent of the representative",
                ind.representative_independent,
            ));
            if integrability_check(g).all_pass() {
                conditions.extend(integrability_conditions(&ind.integrability));
            }
            if let Some(z) = ind.zero_eigenspan_closed {
                conditions.push(Condition::flag(
                    "0-eigenspan of the induced endomorphism is closed",
                    z,
                ));
            }
            let c = sub.chart();
            let alpha: serde_json::Map<String, Value> = sub
                .tangent_indices()
                .iter()
                .zip(&ind.alpha_table)
                .map(|(&t, a)| {
                    let terms: serde_json::Map<String, Value> = a
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| !num_traits::Zero::is_zero(*f))
                        .map(|(i, f)| (format!("d{}", c.coord(i)), json!(f.to_string())))
                        .collect();
                    (format!("{}v", c.coord(t)), Value::Object(terms))
                })
                .collect();
            Outcome::ok(
                conditions,
                json!({
                    "induced": gcps_json(&ind.gcps),
                    "induced_overall": ind.integrability.overall.label(),
                    "alpha": alpha,
                }),
            )
        }
        TaskKind::Classify(g, sub, normal) => match classify_submanifold(g, sub, normal.as_deref())
        {
            Err(e) => Outcome::reduction_error(e),
            Ok(c) => Outcome::ok(
                Vec::new(),
                json!({
                    "label": c.label(),
                    "invariant": c.invariant.passed,
                    "poisson_dirac": c.poisson_dirac,
                    "quasi_invariant": c.quasi_invariant,
                    "split": c.split.as_ref().map(|s| s.passed),
                    "poisson_nijenhuis_ambient": c.poisson_nijenhuis_ambient,
                    "pn_submanifold": c.pn_submanifold,
                    "hierarchy_matches": c.hierarchy_matches,
                    "induced_nijenhuis_zero": c.induced_nijenhuis_zero,
                }),
            ),
        },
        TaskKind::MapCheck(f, g1, g2) => match cps_map_check(f, g1, g2) {
            Err(e) => Outcome::error(e),
            Ok(r) => Outcome::ok(
                vec![
                    (&r.pi_related).into(),
                    (&r.sigma_pullback).into(),
                    (&r.a_intertwined).into(),
                ],
                Value::Null,
            ),
        },
        TaskKind::NormalForm {
            g,
            point,
            leaf,
            normal,
        } => match leaf_normal_form(g, point, leaf, normal) {
            Err(e) => Outcome::error(e),
            Ok(r) => Outcome::ok(
                vec![
                    Condition::flag("block diagonal in the adapted frame", r.block_diagonal),
                    Condition::flag("leaf block is symplectic", r.leaf_is_symplectic),
                    Condition::flag("normal block is classical", r.normal_is_classical),
                ],
                json!({
                    "point": rationals_json(point),
                    "b_fields": r.b_fields.iter().map(form_json).collect::<Vec<_>>(),
                    "normal_form": rational_matrix_json(&r.normal_form),
                    "label": r.label,
                }),
            ),
        },
        TaskKind::Dirac(span, lambda) => {
            let twist = match lambda.as_ref().map(|l| Twist::new(l.clone())).transpose() {
                Ok(t) => t,
                Err(e) => return Outcome::error(e),
            };
            let points = span.sample_points(seed, DEFAULT_SAMPLE_COUNT);
            let iso = match span.isotropy_check(&points) {
                Ok(r) => r,
                Err(e) => return Outcome::error(e),
            };
            let closure = match span.closure_check(&points, twist.as_ref()) {
                Ok(r) => r,
                Err(e) => return Outcome::error(e),
            };
            let n = span.chart().dim();
            Outcome::ok(
                vec![
                    Condition::new(
                        "isotropic",
                        iso.non_isotropic_pair.is_none(),
                        iso.non_isotropic_pair
                            .map(|(i, j)| format!("generators {i}, {j}")),
                    ),
                    Condition::new(
                        "maximal rank at sample points",
                        iso.ranks_at_points.iter().all(|&r| r == n),
                        None,
                    ),
                    Condition::new(
                        "closed under the bracket",
                        closure.closed,
                        closure
                            .failures
                            .first()
                            .map(|(i, j)| format!("generators {i}, {j}")),
                    ),
                ],
                json!({
                    "ranks": iso.ranks_at_points,
                    "membership": match closure.mode {
                        MembershipMode::Symbolic => "symbolic",
                        MembershipMode::SamplePoints => "sample-points",
                    },
                }),
            )
        }
    }
}
