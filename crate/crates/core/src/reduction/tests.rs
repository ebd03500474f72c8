use num_traits::Zero;

use super::*;
use crate::calculus::{KForm, KVector, OneOneTensor};
use crate::gcps::{
    classical_structure, direct_sum, hitchin_to_gcps, symplectic_structure, Epsilon, Gcps,
    HitchinPair, SymplecticVariant,
};
use crate::linalg::Matrix;

fn r4() -> Chart {
    Chart::of("R4", &["q1", "p1", "q2", "p2"])
}

fn std_pi4(c: &Chart) -> KVector {
    KVector::basis(c, &[0, 1]).add(&KVector::basis(c, &[2, 3]))
}

fn std_w4(c: &Chart) -> KForm {
    KForm::basis(c, &[0, 1]).add(&KForm::basis(c, &[2, 3]))
}

fn unit(c: &Chart, i: usize) -> VectorField {
    VectorField::coordinate(c, i)
}

fn coisotropic(c: &Chart) -> (SubmanifoldSpec, FoliationSpec, ControlBundle) {
    let n = SubmanifoldSpec::new(c, &["p2"]).unwrap();
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    let e = ControlBundle::new(&n, vec![unit(c, 2)]).unwrap();
    (n, f, e)
}

fn sympl(w: &KForm, eps: Epsilon, v: SymplecticVariant) -> Gcps {
    symplectic_structure(w, eps, v).unwrap()
}

#[test]
fn spec_types() {
    let c = r4();
    let n = SubmanifoldSpec::new(&c, &["p2"]).unwrap();
    assert_eq!(n.induced_chart().coords(), &["q1", "p1", "q2"]);
    assert!(SubmanifoldSpec::new(&c, &["q1", "p1", "q2", "p2"]).is_err());
    assert!(SubmanifoldSpec::new(&c, &["z"]).is_err());
    assert!(FoliationSpec::new(&n, &["p2"]).is_err());
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    assert_eq!(f.quotient_chart().coords(), &["q1", "p1"]);
    assert!(f.descend(&n.induced_chart().x(2)).is_err());
    let p: Vec<crate::Rational> = [1, 2, 3]
        .map(|v| crate::Rational::from_integer(v.into()))
        .to_vec();
    assert_eq!(n.embed_point(&p)[3], crate::Rational::zero());
}

#[test]
fn control_examples() {
    let c = r4();
    let pi = std_pi4(&c);
    let (n, f, e) = coisotropic(&c);
    let r = control_bundle_check(&pi, &e, &f).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.rank, 1);

    let e2 = ControlBundle::new(&n, vec![unit(&c, 3)]).unwrap();
    assert!(!control_bundle_check(&pi, &e2, &f).unwrap().a.passed);
    let trivial = FoliationSpec::trivial(&n);
    assert!(control_bundle_check(&pi, &e2, &trivial).unwrap().a.passed);

    let n2 = SubmanifoldSpec::new(&c, &["q2", "p2"]).unwrap();
    let r =
        control_bundle_check(&pi, &ControlBundle::zero(&n2), &FoliationSpec::trivial(&n2)).unwrap();
    assert!(r.a.passed && r.b.passed);
    assert!(!r.c.passed);
    assert!(r.c.witness.as_deref().unwrap().contains("∂p2"), "{r:?}");
}

#[test]
fn bracket_condition_detects_failure() {
    // π = q2 ∂q1∧∂p1 is not invariant along E = span(∂q2).
    let c = r4();
    let pi = KVector::basis(&c, &[0, 1]).scale(&c.x(2));
    let n = SubmanifoldSpec::whole(&c);
    let e = ControlBundle::new(&n, vec![unit(&c, 2)]).unwrap();
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    let r = control_bundle_check(&pi, &e, &f).unwrap();
    assert!(!r.b.passed, "{r:?}");
    assert!(matches!(
        poisson_reduce(&pi, &e, &f),
        Err(ReductionError::Hypothesis { .. })
    ));
}

#[test]
fn poisson_reduction_examples() {
    let c = r4();
    let (_, f, e) = coisotropic(&c);
    let q = f.quotient_chart();
    assert_eq!(
        poisson_reduce(&std_pi4(&c), &e, &f).unwrap(),
        KVector::basis(q, &[0, 1])
    );

    let whole = SubmanifoldSpec::whole(&c);
    let id = FoliationSpec::trivial(&whole);
    let pi = KVector::basis(&c, &[0, 1])
        .scale(&c.x(0))
        .add(&KVector::basis(&c, &[2, 3]));
    let out = poisson_reduce(&pi, &ControlBundle::zero(&whole), &id).unwrap();
    assert_eq!(out.to_matrix(), pi.to_matrix());
    assert!(poisson_reduce(&KVector::zero(&c, 2), &e, &f)
        .unwrap()
        .is_zero());
}

#[test]
fn controlled_extensions_differ_but_reduce_alike() {
    let c = r4();
    let (n, _, e) = coisotropic(&c);
    let lam = n.unit(0);
    let a = controlled_extension(&e, &lam, Extension::Coordinate).unwrap();
    let b = controlled_extension(&e, &lam, Extension::Sheared).unwrap();
    assert_ne!(a, b);
    for v in [&a, &b] {
        assert!(v[2].is_zero());
    }
}

#[test]
fn gcps_reduction_examples() {
    let c = r4();
    let (_, f, e) = coisotropic(&c);
    let q = f.quotient_chart().clone();
    let w2 = KForm::basis(&q, &[0, 1]);
    for eps in [Epsilon::Complex, Epsilon::Paracomplex, Epsilon::Subtangent] {
        for v in [SymplecticVariant::First, SymplecticVariant::Second] {
            let g = sympl(&std_w4(&c), eps, v);
            let r = gcps_reduce(&g, &e, &f).unwrap();
            assert_eq!(r.reduced, symplectic_structure(&w2, eps, v).unwrap());
            assert!(r.direct_formula_agrees);
            assert!(r.integrability.all_pass());
        }
    }
    let g = sympl(&std_w4(&c), Epsilon::Complex, SymplecticVariant::First);
    let whole = SubmanifoldSpec::whole(&c);
    let r = gcps_reduce(
        &g,
        &ControlBundle::zero(&whole),
        &FoliationSpec::trivial(&whole),
    )
    .unwrap();
    assert_eq!(r.reduced.to_big_endo().matrix(), g.to_big_endo().matrix());
}

#[test]
fn gcps_reduction_hypothesis_failures() {
    let c = r4();
    let (n, f, e) = coisotropic(&c);
    // A mixes ∂q1 into ∂p2: N is not invariant.
    let mut a = Matrix::zeros(4, 4);
    a[(3, 0)] = Rf::from_int(1);
    let g = Gcps::assemble(
        Epsilon::Subtangent,
        OneOneTensor::new(&c, a),
        KVector::zero(&c, 2),
        KForm::zero(&c, 2),
    )
    .unwrap();
    let e0 = ControlBundle::new(&n, vec![unit(&c, 2)]).unwrap();
    let err = gcps_reduce(&g, &e0, &f).unwrap_err();
    assert!(
        matches!(
            err,
            ReductionError::Hypothesis {
                name: reduce::HYP_A_INVARIANT,
                ..
            }
        ),
        "{err}"
    );
    // σ with a fiber component.
    let sig = KForm::basis(&c, &[0, 2]);
    let g = Gcps::assemble(
        Epsilon::Subtangent,
        OneOneTensor::zero(&c),
        KVector::zero(&c, 2),
        sig,
    )
    .unwrap();
    let err = gcps_reduce(&g, &e, &f).unwrap_err();
    assert!(
        matches!(
            err,
            ReductionError::Hypothesis {
                name: reduce::HYP_SIGMA_BASIC,
                ..
            }
        ),
        "{err}"
    );
    // A depending on the fiber coordinate.
    let mut a = Matrix::zeros(4, 4);
    a[(0, 1)] = c.x(2);
    let g = Gcps::assemble(
        Epsilon::Subtangent,
        OneOneTensor::new(&c, a),
        KVector::zero(&c, 2),
        KForm::zero(&c, 2),
    )
    .unwrap();
    let err = gcps_reduce(&g, &e, &f).unwrap_err();
    assert!(
        matches!(
            err,
            ReductionError::Hypothesis {
                name: reduce::HYP_A_PROJECTABLE,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn enlarged_and_pseudonormal() {
    let c = r4();
    let n = SubmanifoldSpec::new(&c, &["p2"]).unwrap();
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    let q = f.quotient_chart().clone();
    let g = sympl(&std_w4(&c), Epsilon::Complex, SymplecticVariant::First);
    let ei = enlarged_image(&g, &n).unwrap();
    assert_eq!(ei.rank().unwrap(), 1);
    let gen = n.restrict_vector(&ei.generators()[0]).unwrap();
    assert!(gen[2] != Rf::zero() && gen.iter().enumerate().all(|(i, v)| i == 2 || v.is_zero()));
    let expected = symplectic_structure(
        &KForm::basis(&q, &[0, 1]),
        Epsilon::Complex,
        SymplecticVariant::First,
    )
    .unwrap();
    let r = reduce_via_enlarged(&g, &n, &f).unwrap();
    assert_eq!(r.reduced, expected);
    assert_eq!(r.second_lie_condition, Some(true));
    assert_eq!(
        reduce_via_pseudonormal(&g, &n, &f).unwrap().reduced,
        expected
    );
    assert!(reduce_via_pseudonormal(&g, &n, &FoliationSpec::trivial(&n)).is_err());

    // symplectic submanifold: trivial foliation, induced structure
    let n2 = SubmanifoldSpec::new(&c, &["q2", "p2"]).unwrap();
    let nu = pseudo_normal(g.pi(), &n2).unwrap();
    assert_eq!(nu.rank().unwrap(), 2);
    // ♯π(ann E) = ♯π(span(dq1, dp1)) is tangent; the result is the first factor
    let r = reduce_via_pseudonormal(&g, &n2, &FoliationSpec::trivial(&n2)).unwrap();
    assert_eq!(
        r.reduced.pi().to_matrix(),
        KVector::basis(r.reduced.chart(), &[0, 1]).to_matrix()
    );

    let whole = SubmanifoldSpec::whole(&c);
    let ei = enlarged_image(&g, &whole).unwrap();
    assert_eq!(ei.rank().unwrap(), 0);
}

#[test]
fn enlarged_for_classical_structures() {
    let c = r4();
    let n = SubmanifoldSpec::new(&c, &["p2"]).unwrap();
    // π = 0, A = 0, ε = 0: ν^{ei} = 0 and the reduction is (0, 0, ι*σ)
    let sig = KForm::basis(&c, &[0, 1]).add(&KForm::basis(&c, &[2, 3]));
    let g = Gcps::assemble(
        Epsilon::Subtangent,
        OneOneTensor::zero(&c),
        KVector::zero(&c, 2),
        sig,
    )
    .unwrap();
    let r = reduce_via_enlarged(&g, &n, &FoliationSpec::trivial(&n)).unwrap();
    assert_eq!(
        *r.reduced.sigma(),
        n.pullback(g.sigma())
            .unwrap()
            .reindex_frame(r.reduced.chart(), &[Some(0), Some(1), Some(2)], |f| Ok(
                f.clone()
            ))
            .unwrap()
    );
    assert!(r.reduced.pi().is_zero() && r.reduced.a().is_zero());
    // π = 0 with invertible A: ν^{ei} = TN, the leaf space is a point
    let j = classical_structure(
        &OneOneTensor::new(
            &c,
            Matrix::from_rows(
                vec![
                    vec![0, -1, 0, 0],
                    vec![1, 0, 0, 0],
                    vec![0, 0, 0, -1],
                    vec![0, 0, 1, 0],
                ]
                .into_iter()
                .map(|r| r.into_iter().map(Rf::from_int).collect())
                .collect(),
            ),
        ),
        Epsilon::Complex,
    )
    .unwrap();
    let n2 = SubmanifoldSpec::new(&c, &["q2", "p2"]).unwrap();
    let err = reduce_via_enlarged(&j, &n2, &FoliationSpec::trivial(&n2)).unwrap_err();
    assert!(
        matches!(
            err,
            ReductionError::Hypothesis {
                name: reduce::HYP_FOLIATION,
                ..
            }
        ),
        "{err}"
    );
    // the same data through the general route with E = 0 is the induced structure
    let r = gcps_reduce(&j, &ControlBundle::zero(&n2), &FoliationSpec::trivial(&n2)).unwrap();
    assert_eq!(
        r.reduced.a().matrix(),
        &Matrix::from_rows(vec![
            vec![Rf::zero(), Rf::from_int(-1)],
            vec![Rf::from_int(1), Rf::zero()]
        ])
    );

    let bad = Gcps::assemble(
        Epsilon::Subtangent,
        OneOneTensor::zero(&c),
        KVector::zero(&c, 2),
        KForm::basis(&c, &[0, 1]).scale(&c.x(2)),
    )
    .unwrap();
    let err = reduce_via_enlarged(&bad, &n, &FoliationSpec::trivial(&n)).unwrap_err();
    assert!(
        matches!(
            err,
            ReductionError::Hypothesis {
                name: reduce::HYP_DSIGMA,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn sigma_a_hypothesis() {
    let c = r4();
    let n = SubmanifoldSpec::new(&c, &["q2", "p2"]).unwrap();
    let a = OneOneTensor::identity(&c);
    // A = Id, σ = dq1∧dp1, π = 0 satisfies A² = Id only with ε = +1.
    let g = Gcps::assemble(
        Epsilon::Paracomplex,
        a,
        KVector::zero(&c, 2),
        KForm::basis(&c, &[0, 1]),
    )
    .unwrap();
    let err = reduce_via_enlarged(&g, &n, &FoliationSpec::trivial(&n)).unwrap_err();
    assert!(
        matches!(
            err,
            ReductionError::Hypothesis {
                name: reduce::HYP_SIGMA_A,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn hitchin_reduction() {
    let c = r4();
    let n = SubmanifoldSpec::new(&c, &["p2"]).unwrap();
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    let q = f.quotient_chart().clone();
    for a in [OneOneTensor::identity(&c), OneOneTensor::zero(&c)] {
        let h = HitchinPair::new(std_w4(&c), a.clone()).unwrap();
        let hq = hitchin_reduce(&h, &n, &f).unwrap();
        assert_eq!(*hq.varpi(), KForm::basis(&q, &[0, 1]));
        assert_eq!(hq.a().is_identity(), a.is_identity());
        for eps in [Epsilon::Complex, Epsilon::Paracomplex, Epsilon::Subtangent] {
            let lhs = hitchin_to_gcps(&hq, eps).unwrap();
            let rhs = reduce_via_pseudonormal(&hitchin_to_gcps(&h, eps).unwrap(), &n, &f)
                .unwrap()
                .reduced;
            assert_eq!(lhs, rhs);
        }
    }
    let whole = SubmanifoldSpec::whole(&c);
    let h = HitchinPair::new(std_w4(&c), OneOneTensor::identity(&c)).unwrap();
    let hq = hitchin_reduce(&h, &whole, &FoliationSpec::trivial(&whole)).unwrap();
    assert_eq!(hq.varpi().to_matrix(), h.varpi().to_matrix());
}

#[test]
fn momentum_worked_example() {
    let c = r4();
    let g0 = sympl(&std_w4(&c), Epsilon::Complex, SymplecticVariant::First);
    let m0 = translation_momentum_reduction(&g0, "p2", "q2").unwrap();
    assert!(!m0.momentum_condition);
    assert!(m0.level_set_invariant && m0.orbits_match);
    let g1 = sympl(&std_w4(&c), Epsilon::Paracomplex, SymplecticVariant::Second);
    let m1 = translation_momentum_reduction(&g1, "p2", "q2").unwrap();
    assert!(m1.momentum_condition && m1.level_set_invariant && m1.orbits_match);
    assert!(m1.result.integrability.all_pass());
    assert!(m1.result.reduced.a().is_identity());
}

#[test]
fn direct_sum_functoriality() {
    let c1 = Chart::of("A", &["q1", "p1", "q2", "p2"]);
    let c2 = Chart::of("B", &["x", "y"]);
    let g1 = sympl(&std_w4(&c1), Epsilon::Complex, SymplecticVariant::First);
    let j = OneOneTensor::new(
        &c2,
        Matrix::from_rows(vec![
            vec![Rf::zero(), Rf::from_int(-1)],
            vec![Rf::from_int(1), Rf::zero()],
        ]),
    );
    let g2 = classical_structure(&j, Epsilon::Complex).unwrap();
    let sum = direct_sum(&g1, &g2).unwrap();
    let n = SubmanifoldSpec::new(sum.chart(), &["p2"]).unwrap();
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    let e = ControlBundle::new(&n, vec![unit(sum.chart(), 2)]).unwrap();
    let r = gcps_reduce(&sum, &e, &f).unwrap().reduced;

    let (_, f1, e1) = coisotropic(&c1);
    let r1 = gcps_reduce(&g1, &e1, &f1).unwrap().reduced;
    let expected = direct_sum(&r1, &g2).unwrap();
    assert_eq!(r.to_big_endo().matrix(), expected.to_big_endo().matrix());

    // reduce away the classical factor: the symplectic factor remains
    let nx = SubmanifoldSpec::new(sum.chart(), &["x", "y"]).unwrap();
    let r = gcps_reduce(
        &sum,
        &ControlBundle::zero(&nx),
        &FoliationSpec::trivial(&nx),
    )
    .unwrap()
    .reduced;
    assert_eq!(r.to_big_endo().matrix(), g1.to_big_endo().matrix());
}

#[test]
fn reduced_poisson_is_poisson_on_random_coisotropic_data() {
    // π = f(q1,p1) ∂q1∧∂p1 + ∂q2∧∂p2 with f polynomial
    let c = r4();
    let mut r = crate::sample::rng(7);
    for _ in 0..4 {
        let t = c.sub_chart("t", &[0, 1]);
        let h = t
            .transfer(&crate::sample::random_polynomial(&mut r, &t, 2, 3), &c)
            .unwrap();
        let pi = KVector::basis(&c, &[0, 1])
            .scale(&h)
            .add(&KVector::basis(&c, &[2, 3]));
        let (_, f, e) = coisotropic(&c);
        let out = poisson_reduce(&pi, &e, &f).unwrap();
        assert!(out.schouten(&out).is_zero());
        let qc = f.quotient_chart();
        let hq = c.transfer(&h, qc).unwrap();
        assert_eq!(out, KVector::basis(qc, &[0, 1]).scale(&hq));
    }
}
