use super::*;
use crate::calculus::{Chart, VectorField};
use crate::linalg::Matrix;
use crate::sample::{random_form, random_vector_field, rng, sample_points};

fn r2() -> Chart {
    Chart::of("R2", &["x", "y"])
}

fn vf(c: &Chart, i: usize) -> VectorField {
    VectorField::coordinate(c, i)
}

fn dx(c: &Chart, i: usize) -> KForm {
    KForm::basis(c, &[i])
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_section(seed: u64, c: &Chart) -> BigSection {
    let mut g = rng(seed);
    BigSection::new(
        random_vector_field(&mut g, c, 2),
        random_form(&mut g, c, 1, 2),
    )
}

/// Φ with blocks (A, ♯π, ♭σ, −Aᵀ) from full matrices.
fn endo(c: &Chart, a: &Matrix<Rf>, pi: &KVector, sigma: &KForm) -> BigEndo {
    BigEndo::from_blocks(
        c,
        a,
        &pi.to_matrix().transpose(),
        &sigma.to_matrix().transpose(),
        &a.transpose().neg(),
    )
}

#[test]
fn pairings() {
    let c = r2();
    let s1 = BigSection::new(vf(&c, 0), dx(&c, 1));
    let s2 = BigSection::new(vf(&c, 1), dx(&c, 0));
    assert_eq!(neutral_pairing(&s1, &s2).unwrap(), Rf::from_int(1));
    assert!(neutral_pairing(
        &BigSection::tangent(vf(&c, 0)),
        &BigSection::tangent(vf(&c, 1))
    )
    .unwrap()
    .is_zero());
    assert!(neutral_pairing(
        &BigSection::cotangent(dx(&c, 0)),
        &BigSection::cotangent(dx(&c, 1))
    )
    .unwrap()
    .is_zero());
    assert!(omega_pairing(&s1, &s2).unwrap().is_zero());
    let w = omega_pairing(
        &BigSection::tangent(vf(&c, 0)),
        &BigSection::cotangent(dx(&c, 0)),
    )
    .unwrap();
    assert_eq!(w, Rf::constant(q(-1, 2)));
    let s = random_section(1, &c);
    assert!(omega_pairing(&s, &s).unwrap().is_zero());
}

#[test]
fn courant_bracket_examples() {
    let c = r2();
    let ex = BigSection::tangent(vf(&c, 0));
    assert!(courant_bracket(&ex, &BigSection::cotangent(dx(&c, 1)))
        .unwrap()
        .is_zero());
    let got = courant_bracket(&ex, &BigSection::cotangent(dx(&c, 1).scale(&c.x(0)))).unwrap();
    assert_eq!(got, BigSection::cotangent(dx(&c, 1)));
    for seed in 0..4 {
        let s1 = random_section(seed, &c);
        let s2 = random_section(seed + 100, &c);
        assert!(courant_bracket(&s1, &s1).unwrap().is_zero());
        assert_eq!(
            courant_bracket(&s1, &s2).unwrap(),
            courant_bracket(&s2, &s1).unwrap().neg()
        );
    }
}

#[test]
fn twisted_bracket_examples() {
    let c = Chart::of("R3", &["x", "y", "z"]);
    let lambda = KForm::basis(&c, &[0, 1, 2]);
    let got = twisted_courant_bracket(
        &BigSection::tangent(vf(&c, 0)),
        &BigSection::tangent(vf(&c, 1)),
        &lambda,
    )
    .unwrap();
    assert_eq!(got, BigSection::cotangent(dx(&c, 2).neg()));
    let s1 = random_section(3, &c);
    let s2 = random_section(4, &c);
    let zero = KForm::zero(&c, 3);
    assert_eq!(
        twisted_courant_bracket(&s1, &s2, &zero).unwrap(),
        courant_bracket(&s1, &s2).unwrap()
    );
    assert!(twisted_courant_bracket(&s1, &s1, &lambda)
        .unwrap()
        .is_zero());
    let c4 = Chart::of("R4", &["x", "y", "z", "w"]);
    let open = KForm::basis(&c4, &[0, 1, 2]).scale(&c4.x(3));
    let s = BigSection::zero(&c4);
    assert_eq!(
        twisted_courant_bracket(&s, &s, &open),
        Err(CourantError::TwistNotClosed)
    );
}

#[test]
fn pi_algebroid_and_iso() {
    let c = r2();
    let pi = KVector::basis(&c, &[0, 1]);
    assert_eq!(
        pi_iso(&pi, &BigSection::cotangent(dx(&c, 0))).unwrap(),
        BigSection::new(vf(&c, 1), dx(&c, 0))
    );
    let zero = KVector::zero(&c, 2);
    for seed in 0..3 {
        let s1 = random_section(seed, &c);
        let s2 = random_section(seed + 50, &c);
        assert_eq!(
            pi_algebroid_bracket(&zero, &s1, &s2).unwrap(),
            courant_bracket(&s1, &s2).unwrap()
        );
        for p in [pi.clone(), pi.scale(&(&c.x(0) * &c.x(1)))] {
            let lhs = pi_iso(&p, &pi_algebroid_bracket(&p, &s1, &s2).unwrap()).unwrap();
            let rhs =
                courant_bracket(&pi_iso(&p, &s1).unwrap(), &pi_iso(&p, &s2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn torsion_examples() {
    let c = r2();
    assert!(torsion_frame_report(&BigEndo::zero(&c), None).all_zero);
    let id = torsion_frame_report(&BigEndo::identity(&c), None);
    assert!(id.all_zero && !id.conclusive);
    let z = Matrix::zeros(2, 2);
    let sympl = endo(
        &c,
        &z,
        &KVector::basis(&c, &[0, 1]),
        &KForm::basis(&c, &[0, 1]),
    );
    assert_eq!(sympl.potency(), Some(-1));
    let rep = torsion_frame_report(&sympl, None);
    assert!(rep.all_zero && rep.conclusive);
    let proj = torsion_frame_report(&BigEndo::tangent_projection(&c), None);
    assert!(!proj.conclusive);
    assert_eq!(proj.label.as_deref(), Some(endo::NON_TENSORIAL_LABEL));
}

#[test]
fn torsion_detects_non_closed_compatible_tensor() {
    // A = q2·Id with the non-degenerate π: ϖ_A is not closed
    let c = Chart::of("R4", &["q1", "p1", "q2", "p2"]);
    let f = c.x(2);
    let a = Matrix::scalar(4, f.clone());
    let pi = KVector::basis(&c, &[0, 1]).add(&KVector::basis(&c, &[2, 3]));
    let w = KForm::basis(&c, &[0, 1]).add(&KForm::basis(&c, &[2, 3]));
    // σ = ϖ(A²X,Y) + ϖ(X,Y) for ε = −1
    let sigma = w.scale(&(&(&f * &f) + &Rf::from_int(1)));
    let phi = endo(&c, &a, &pi, &sigma);
    assert_eq!(phi.potency(), Some(-1));
    let rep = torsion_frame_report(&phi, None);
    assert!(rep.conclusive && !rep.all_zero);
}

#[test]
fn pure_form_subtangent_torsion_vanishes() {
    // Φ(X,α) = (0, ♭σX) squares to zero and has zero torsion for any σ
    let c = Chart::of("R4", &["q1", "p1", "q2", "p2"]);
    let sigma = KForm::basis(&c, &[0, 1]).scale(&c.x(2));
    let z = Matrix::zeros(4, 4);
    let phi = endo(&c, &z, &KVector::zero(&c, 2), &sigma);
    assert_eq!(phi.potency(), Some(0));
    assert!(torsion_frame_report(&phi, None).all_zero);
}

#[test]
fn spans() {
    let c = r2();
    let pts = sample_points(9, 2, 3);
    let tm = SectionSpan::new(
        vec![
            BigSection::tangent(vf(&c, 0)),
            BigSection::tangent(vf(&c, 1)),
        ],
        2,
    );
    let cot = SectionSpan::new(
        vec![
            BigSection::cotangent(dx(&c, 0)),
            BigSection::cotangent(dx(&c, 1)),
        ],
        2,
    );
    let graph = SectionSpan::new(
        vec![
            BigSection::new(vf(&c, 1), dx(&c, 0)),
            BigSection::new(vf(&c, 0).neg(), dx(&c, 1)),
        ],
        2,
    );
    for s in [&tm, &cot, &graph] {
        assert!(s.isotropy_check(&pts).unwrap().almost_dirac);
        let cl = s.closure_check(&pts, None).unwrap();
        assert!(cl.closed);
        assert_eq!(cl.mode, MembershipMode::Symbolic);
    }
    let bad = SectionSpan::new(
        vec![
            BigSection::tangent(vf(&c, 0)),
            BigSection::tangent(vf(&c, 0)),
        ],
        2,
    );
    assert!(matches!(
        bad.ranks(&pts),
        Err(CourantError::RankDeficiency { .. })
    ));
    let origin = [q(0, 1), q(0, 1)];
    let d = presymplectic_data(&tm, &origin).unwrap();
    assert_eq!(d.distribution.len(), 2);
    assert!(d.theta.is_zero());
    let d = presymplectic_data(&cot, &origin).unwrap();
    assert!(d.distribution.is_empty() && d.theta.rows() == 0);
    let d = presymplectic_data(&graph, &origin).unwrap();
    assert_eq!(d.distribution.len(), 2);
    assert_eq!(d.theta[(0, 1)], q(-1, 1));
    assert_eq!(d.theta[(1, 0)], q(1, 1));
}

#[test]
fn non_closed_span_detected() {
    // graph of B = z dx∧dy, which is not closed
    let c = Chart::of("R3", &["x", "y", "z"]);
    let pts = sample_points(2, 3, 3);
    let z = c.x(2);
    let s = SectionSpan::new(
        vec![
            BigSection::new(vf(&c, 0), dx(&c, 1).scale(&z)),
            BigSection::new(vf(&c, 1), dx(&c, 0).scale(&z).neg()),
            BigSection::tangent(vf(&c, 2)),
        ],
        3,
    );
    assert!(s.isotropy_check(&pts).unwrap().almost_dirac);
    let cl = s.closure_check(&pts, None).unwrap();
    assert!(!cl.closed);
    assert!(!cl.failures.is_empty());
}
