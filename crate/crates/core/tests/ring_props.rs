use gencps::sample::{random_polynomial, rng, sample_points};
use gencps::{Chart, Rf};
use num_traits::Zero;
use proptest::prelude::*;

fn chart() -> Chart {
    Chart::of("R3", &["x", "y", "z"])
}

/// Random quotient with a denominator that is never identically zero.
fn random_rf(seed: u64) -> Rf {
    let c = chart();
    let mut g = rng(seed);
    let num = random_polynomial(&mut g, &c, 2, 3);
    let mut den = random_polynomial(&mut g, &c, 1, 2);
    if den.is_zero() {
        den = Rf::from_int(1);
    }
    &num / &den
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (random_rf(a), random_rf(b), random_rf(c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a / &a, Rf::from_int(1));
            prop_assert!((&(&b / &a) * &a).rf_equal(&b).unwrap());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in any::<u64>(), b in any::<u64>(), p in any::<u64>()) {
        let (f, g) = (random_rf(a), random_rf(b));
        for pt in sample_points(p, 3, 4) {
            let (Ok(fv), Ok(gv)) = (f.eval(&pt), g.eval(&pt)) else { continue };
            prop_assert_eq!((&f * &g).eval(&pt).unwrap(), &fv * &gv);
            prop_assert_eq!((&f + &g).eval(&pt).unwrap(), &fv + &gv);
        }
    }

    #[test]
    fn derivatives_leibniz_and_commute(a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (random_rf(a), random_rf(b));
        prop_assert_eq!((&f * &g).partial(0), &(&f.partial(0) * &g) + &(&f * &g.partial(0)));
        prop_assert_eq!(f.partial(0).partial(1), f.partial(1).partial(0));
    }
}

#[test]
fn spec_equalities() {
    let c = Chart::of("R2", &["x", "y"]);
    let (x, y) = (c.x(0), c.x(1));
    let one = Rf::from_int(1);
    let lhs = &(&(&x * &x) - &one) / &(&x - &one);
    assert!(lhs.rf_equal(&(&x + &one)).unwrap());
    assert!(Rf::zero().rf_equal(&(&Rf::zero() / &(&x + &one))).unwrap());
    let s = &x + &y;
    assert!((&(&s * &s) / &s).rf_equal(&s).unwrap());
    let f = &x / &(&y + &one);
    assert_eq!(
        f.eval(&[2.into(), 1.into()].map(|v: i64| gencps::Rational::from_integer(v.into())))
            .unwrap(),
        gencps::Rational::from_integer(1.into())
    );
    assert_eq!(f.partial(0), &one / &(&y + &one));
}
