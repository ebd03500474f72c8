use super::*;
use crate::sample::{
    random_form, random_multivector, random_polynomial, random_tensor, random_vector_field, rng,
};
use crate::Matrix;

fn r2() -> Chart {
    Chart::of("R2", &["x", "y"])
}

fn r3() -> Chart {
    Chart::of("R3", &["x", "y", "z"])
}

fn int(v: i64) -> Rf {
    Rf::from_int(v)
}

fn dxdy(c: &Chart) -> KForm {
    KForm::basis(c, &[0, 1])
}

#[test]
fn lie_bracket_examples() {
    let c = r2();
    let (dx, dy) = (
        VectorField::coordinate(&c, 0),
        VectorField::coordinate(&c, 1),
    );
    assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
    let xdy = dy.scale(&c.x(0));
    assert_eq!(lie_bracket(&xdy, &dx).unwrap(), dy.neg());
    assert!(xdy.bracket(&xdy).is_zero());
}

#[test]
fn exterior_derivative_examples() {
    let c = r2();
    let x_dy = KForm::basis(&c, &[1]).scale(&c.x(0));
    assert_eq!(x_dy.d(), dxdy(&c));
    assert!(dxdy(&c).d().is_zero());
    let xy_dx = KForm::basis(&c, &[0]).scale(&(&c.x(0) * &c.x(1)));
    assert_eq!(xy_dx.d().get(&[0, 1]), -c.x(0));
    assert_eq!(xy_dx.d().get(&[1, 0]), c.x(0));
}

#[test]
fn interior_product_examples() {
    let c = r2();
    let (ex, ey) = (
        VectorField::coordinate(&c, 0),
        VectorField::coordinate(&c, 1),
    );
    assert_eq!(
        interior_product(&ex, &dxdy(&c)).unwrap(),
        KForm::basis(&c, &[1])
    );
    assert_eq!(
        interior_product(&ey, &dxdy(&c)).unwrap(),
        KForm::basis(&c, &[0]).neg()
    );
    let x = c.x(0);
    let got = interior_product(&ex.scale(&x), &dxdy(&c).scale(&x)).unwrap();
    assert_eq!(got, KForm::basis(&c, &[1]).scale(&(&x * &x)));
    assert_eq!(
        interior_product(&ex, &KForm::function(&c, x)),
        Err(CalculusError::DegreeZero)
    );
    // i(α)(U∧V) = α(U)V − α(V)U
    let uv = KVector::basis(&c, &[0, 1]);
    let dy = KForm::basis(&c, &[1]);
    assert_eq!(
        interior_product_form(&dy, &uv).unwrap(),
        KVector::basis(&c, &[0]).neg()
    );
}

#[test]
fn lie_derivative_examples() {
    let c = r2();
    let ex = VectorField::coordinate(&c, 0);
    let x_dy = KForm::basis(&c, &[1]).scale(&c.x(0));
    assert_eq!(x_dy.lie(&ex), KForm::basis(&c, &[1]));
    let mut g = rng(1);
    let x = random_vector_field(&mut g, &c, 2);
    assert!(OneOneTensor::identity(&c).lie(&x).is_zero());
    assert!(KVector::basis(&c, &[0, 1]).lie(&ex).is_zero());
}

#[test]
fn sharp_flat_conventions() {
    let c = r2();
    let pi = KVector::basis(&c, &[0, 1]);
    let w = dxdy(&c);
    let dx = KForm::basis(&c, &[0]);
    assert_eq!(sharp(&pi, &dx), VectorField::coordinate(&c, 1));
    assert_eq!(
        flat(&w, &VectorField::coordinate(&c, 0)),
        KForm::basis(&c, &[1])
    );
    assert_eq!(flat(&w, &sharp(&pi, &dx)), dx.neg());
    // π(α,β) = β(♯πα)
    let mut g = rng(2);
    let pi = random_multivector(&mut g, &r3(), 2, 1);
    let a = random_form(&mut g, &r3(), 1, 1);
    let b = random_form(&mut g, &r3(), 1, 1);
    assert_eq!(pi.eval(&[&a, &b]), b.eval(&[&sharp(&pi, &a)]));
}

#[test]
fn schouten_examples() {
    let c2 = r2();
    let p = KVector::basis(&c2, &[0, 1]);
    assert!(p.schouten(&p).is_zero());
    let c4 = Chart::of("R4", &["x", "y", "z", "w"]);
    let pi = KVector::basis(&c4, &[0, 1]).add(&KVector::basis(&c4, &[2, 3]));
    assert!(pi.schouten(&pi).is_zero());
    // vectors: Schouten = Lie bracket
    let mut g = rng(3);
    let c = r3();
    let x = random_vector_field(&mut g, &c, 2);
    let y = random_vector_field(&mut g, &c, 2);
    let sx = KVector::from_vector(&x).schouten(&KVector::from_vector(&y));
    assert_eq!(sx.to_vector(), x.bracket(&y));
    // [X, f] = X(f) and [π, f] = −♯π df, so the Lichnerowicz differential
    // of a function is ♯π df
    let f = random_polynomial(&mut g, &c, 2, 3);
    let xf = KVector::from_vector(&x).schouten(&KVector::function(&c, f.clone()));
    assert_eq!(xf.get(&[]), x.apply(&f));
    let pi = random_multivector(&mut g, &c, 2, 1);
    let pf = pi.schouten(&KVector::function(&c, f.clone()));
    let hf = sharp(&pi, &KForm::differential(&c, &f));
    assert_eq!(pf.to_vector(), hf.neg());
    assert_eq!(
        lichnerowicz(&pi, &KVector::function(&c, f.clone())).to_vector(),
        hf
    );
    // L_X P = [X, P]
    let p = random_multivector(&mut g, &c, 2, 2);
    assert_eq!(p.lie(&x), KVector::from_vector(&x).schouten(&p));
    let pc = KVector::basis(&c2, &[0, 1]);
    assert!(lichnerowicz(&pc, &KVector::basis(&c2, &[0])).is_zero());
}

/// `Σ_cycl {f,{g,h}}` for a bivector.
fn jacobiator(pi: &KVector, f: &Rf, g: &Rf, h: &Rf) -> Rf {
    let pb = |a: &Rf, b: &Rf| poisson_bracket(pi, a, b);
    &(&pb(f, &pb(g, h)) + &pb(g, &pb(h, f))) + &pb(h, &pb(f, g))
}

#[test]
fn schouten_square_is_twice_the_jacobiator() {
    let c = r3();
    let mut g = rng(4);
    for _ in 0..5 {
        let pi = random_multivector(&mut g, &c, 2, 2);
        let sq = pi.schouten(&pi);
        let (x, y, z) = (c.x(0), c.x(1), c.x(2));
        let dx: Vec<KForm> = (0..3).map(|i| KForm::basis(&c, &[i])).collect();
        let lhs = sq.eval(&[&dx[0], &dx[1], &dx[2]]);
        assert_eq!(lhs, &int(2) * &jacobiator(&pi, &x, &y, &z));
    }
    // [x ∂x∧∂y, ∂x∧∂y] on R3 via polarization
    let p1 = KVector::basis(&c, &[0, 1]).scale(&c.x(0));
    let p2 = KVector::basis(&c, &[0, 1]);
    let mixed = p1.schouten(&p2);
    let s = p1.add(&p2);
    let polar = s.schouten(&s).sub(&p1.schouten(&p1)).sub(&p2.schouten(&p2));
    assert_eq!(mixed.scale(&int(2)), polar);
    assert!(mixed.is_zero());
}

#[test]
fn nijenhuis_examples() {
    let c = r2();
    let j = OneOneTensor::new(
        &c,
        Matrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]),
    );
    assert!(nijenhuis_tensor(&j).iter().all(|(_, v)| v.is_zero()));
    let mut g = rng(5);
    let f = random_polynomial(&mut g, &c, 2, 3);
    let a = OneOneTensor::scalar(&c, f);
    assert!(nijenhuis_tensor(&a).iter().all(|(_, v)| v.is_zero()));
    let a = OneOneTensor::new(
        &c,
        Matrix::from_rows(vec![vec![int(0), c.x(0)], vec![c.x(1), int(0)]]),
    );
    assert!(nijenhuis_tensor(&a).iter().any(|(_, v)| !v.is_zero()));
}

#[test]
fn one_form_bracket_examples() {
    let c = r2();
    let pi = KVector::basis(&c, &[0, 1]);
    let dx = KForm::basis(&c, &[0]);
    let dy = KForm::basis(&c, &[1]);
    assert!(one_form_bracket(&pi, &dx, &dy).is_zero());
    assert!(one_form_bracket(&pi, &dx, &dy.scale(&c.x(0))).is_zero());
    let mut g = rng(6);
    let pi = random_multivector(&mut g, &r3(), 2, 2);
    let a = random_form(&mut g, &r3(), 1, 2);
    assert!(one_form_bracket(&pi, &a, &a).is_zero());
}

#[test]
fn nijenhuis_is_function_bilinear() {
    let c = r3();
    let mut g = rng(7);
    let a = random_tensor(&mut g, &c, 1);
    let x = random_vector_field(&mut g, &c, 1);
    let y = random_vector_field(&mut g, &c, 1);
    let f = random_polynomial(&mut g, &c, 2, 2);
    assert_eq!(a.nijenhuis(&x.scale(&f), &y), a.nijenhuis(&x, &y).scale(&f));
}

#[test]
fn chart_errors() {
    assert_eq!(
        Chart::new("bad", &["x", "x"]).unwrap_err(),
        CalculusError::DuplicateCoordinate("x".into())
    );
    let a = r2();
    let b = r3();
    assert!(lie_bracket(
        &VectorField::coordinate(&a, 0),
        &VectorField::coordinate(&b, 0)
    )
    .is_err());
}

#[test]
fn display_uses_frame_tokens() {
    let c = r2();
    let w = dxdy(&c).scale(&(&c.x(0) + &int(1)));
    assert_eq!(w.to_string(), "(x + 1)*dx^dy");
    assert_eq!(KVector::basis(&c, &[0, 1]).neg().to_string(), "-xv^yv");
}
