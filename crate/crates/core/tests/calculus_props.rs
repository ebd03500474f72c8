use gencps::calculus::{one_form_bracket, poisson_bracket, sharp};
use gencps::sample::{
    random_form, random_multivector, random_polynomial, random_tensor, random_vector_field, rng,
};
use gencps::{Chart, KForm, KVector, Rf};
use proptest::prelude::*;

fn r3() -> Chart {
    Chart::of("R3", &["x", "y", "z"])
}

/// `g · i(df)(∂x∧∂y∧∂z)`, a Poisson bivector for every `f`, `g`.
fn nambu(c: &Chart, f: &Rf, g: &Rf) -> KVector {
    let d = |i: usize| &f.partial(i) * g;
    KVector::from_components(
        c,
        2,
        [(vec![1, 2], d(0)), (vec![2, 0], d(1)), (vec![0, 1], d(2))],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), k in 0usize..3) {
        let c = r3();
        let w = random_form(&mut rng(seed), &c, k, 3);
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn cartan_formula(seed in any::<u64>(), k in 1usize..3) {
        let c = r3();
        let mut g = rng(seed);
        let x = random_vector_field(&mut g, &c, 2);
        let w = random_form(&mut g, &c, k, 2);
        prop_assert_eq!(w.lie(&x), w.d().interior(&x).add(&w.interior(&x).d()));
    }

    #[test]
    fn cartan_on_functions(seed in any::<u64>()) {
        let c = r3();
        let mut g = rng(seed);
        let x = random_vector_field(&mut g, &c, 2);
        let f = random_polynomial(&mut g, &c, 3, 3);
        prop_assert_eq!(KForm::function(&c, f.clone()).lie(&x), KForm::function(&c, x.apply(&f)));
    }

    #[test]
    fn jacobi_identity(seed in any::<u64>()) {
        let c = r3();
        let mut g = rng(seed);
        let x = random_vector_field(&mut g, &c, 2);
        let y = random_vector_field(&mut g, &c, 2);
        let z = random_vector_field(&mut g, &c, 2);
        let s = x.bracket(&y.bracket(&z)).add(&y.bracket(&z.bracket(&x))).add(&z.bracket(&x.bracket(&y)));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn schouten_graded_symmetry(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let c = r3();
        let mut g = rng(seed);
        let a = random_multivector(&mut g, &c, p, 2);
        let b = random_multivector(&mut g, &c, q, 2);
        let ab = a.schouten(&b);
        let ba = b.schouten(&a);
        // [P,Q] = −(−1)^{(p−1)(q−1)} [Q,P]
        let minus_one_power = p % 2 == 0 && q % 2 == 0;
        let expected = if minus_one_power { ba } else { ba.neg() };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn schouten_graded_jacobi(seed in any::<u64>()) {
        // for bivectors P and a vector X: [X,[P,P]] = 2[[X,P],P]
        let c = r3();
        let mut g = rng(seed);
        let x = KVector::from_vector(&random_vector_field(&mut g, &c, 1));
        let p = random_multivector(&mut g, &c, 2, 1);
        let lhs = x.schouten(&p.schouten(&p));
        let xp = x.schouten(&p);
        let rhs = xp.schouten(&p).add(&xp.schouten(&p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_is_schouten_with_vector(seed in any::<u64>(), k in 0usize..4) {
        let c = r3();
        let mut g = rng(seed);
        let x = random_vector_field(&mut g, &c, 2);
        let p = random_multivector(&mut g, &c, k, 2);
        prop_assert_eq!(p.lie(&x), KVector::from_vector(&x).schouten(&p));
    }

    #[test]
    fn tensor_lie_derivative_formula(seed in any::<u64>()) {
        // (L_X A)(Y) = [X, AY] − A[X, Y]
        let c = r3();
        let mut g = rng(seed);
        let a = random_tensor(&mut g, &c, 1);
        let x = random_vector_field(&mut g, &c, 2);
        let y = random_vector_field(&mut g, &c, 1);
        prop_assert_eq!(a.lie(&x).apply(&y), x.bracket(&a.apply(&y)).sub(&a.apply(&x.bracket(&y))));
    }

    #[test]
    fn nijenhuis_function_bilinear(seed in any::<u64>()) {
        let c = r3();
        let mut g = rng(seed);
        let a = random_tensor(&mut g, &c, 1);
        let x = random_vector_field(&mut g, &c, 1);
        let y = random_vector_field(&mut g, &c, 1);
        let f = random_polynomial(&mut g, &c, 2, 2);
        prop_assert_eq!(a.nijenhuis(&x.scale(&f), &y), a.nijenhuis(&x, &y).scale(&f));
        prop_assert_eq!(a.nijenhuis(&x, &y), a.nijenhuis(&y, &x).neg());
    }

    #[test]
    fn exact_form_bracket(seed in any::<u64>()) {
        let c = r3();
        let mut g = rng(seed);
        let pi = nambu(&c, &random_polynomial(&mut g, &c, 2, 2), &random_polynomial(&mut g, &c, 1, 2));
        prop_assert!(pi.schouten(&pi).is_zero());
        let f = random_polynomial(&mut g, &c, 2, 3);
        let h = random_polynomial(&mut g, &c, 2, 3);
        let lhs = one_form_bracket(&pi, &KForm::differential(&c, &f), &KForm::differential(&c, &h));
        prop_assert_eq!(lhs, KForm::differential(&c, &poisson_bracket(&pi, &f, &h)));
    }

    #[test]
    fn sharp_is_slot_one_contraction(seed in any::<u64>()) {
        let c = r3();
        let mut g = rng(seed);
        let pi = random_multivector(&mut g, &c, 2, 1);
        let a = random_form(&mut g, &c, 1, 1);
        let b = random_form(&mut g, &c, 1, 1);
        prop_assert_eq!(pi.eval(&[&a, &b]), b.eval(&[&sharp(&pi, &a)]));
        prop_assert_eq!(pi.eval(&[&a, &b]), -pi.eval(&[&b, &a]));
    }
}
