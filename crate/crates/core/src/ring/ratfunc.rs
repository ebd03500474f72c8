use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::Field;
use super::poly::{Polynomial, Vars};
use super::RingError;

/// Quotient of two polynomials. The representation is not gcd-reduced;
/// equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction<C> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: Field> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        num.common_vars(&den)?;
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        let den = Polynomial::constant(C::one());
        RationalFunction { num: p, den }
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(C::from_i64(v))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::from_poly(Polynomial::var(vars, i))
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn as_constant(&self) -> Option<C> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn vars(&self) -> Vars {
        self.num
            .common_vars(&self.den)
            .expect("numerator and denominator share variables")
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }

    fn normalized(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = C::one() / c;
            return Self::from_poly(num.scale(&inv));
        }
        if let Some(q) = num.div_exact(&den) {
            return Self::from_poly(q);
        }
        let inv = C::one() / den.leading_coeff();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// Exact equality by cross-multiplication.
    pub fn rf_equal(&self, other: &Self) -> Result<bool, RingError> {
        self.vars_with(other)?;
        Ok(self.cross_eq(other))
    }

    fn vars_with(&self, other: &Self) -> Result<Vars, RingError> {
        let a = self.vars();
        let b = other.vars();
        Polynomial::<C>::zero_in(&a).common_vars(&Polynomial::zero_in(&b))
    }

    fn cross_eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    /// Exact value at `point` (indexed like the chart coordinates).
    pub fn eval(&self, point: &[C]) -> Result<C, RingError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(RingError::SingularPoint);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn partial(&self, i: usize) -> Self {
        if self.den.as_constant().is_some() {
            return Self::normalized(self.num.partial(i), self.den.clone());
        }
        let dn = self.num.partial(i);
        let dd = self.den.partial(i);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(top, &self.den * &self.den)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::normalized(self.num.pow(e), self.den.pow(e))
    }

    /// Apply the same polynomial map to numerator and denominator.
    pub fn map_polys(
        &self,
        f: impl Fn(&Polynomial<C>) -> Polynomial<C>,
    ) -> Result<Self, RingError> {
        let den = f(&self.den);
        if den.is_zero() {
            return Err(RingError::SingularPoint);
        }
        Ok(Self::normalized(f(&self.num), den))
    }

    pub fn reindex(&self, map: &[Option<usize>], target: &Vars) -> Result<Self, RingError> {
        self.map_polys(|p| p.reindex(map, target))
    }

    pub fn substitute(&self, subs: &[Polynomial<C>], target: &Vars) -> Result<Self, RingError> {
        self.map_polys(|p| p.substitute(subs, target))
    }

    pub fn lift(&self, vars: &Vars) -> Self {
        RationalFunction {
            num: self.num.lift(vars),
            den: self.den.lift(vars),
        }
    }

    pub fn fmt_with(
        &self,
        f: &mut fmt::Formatter<'_>,
        coeff: impl Fn(&C) -> String,
    ) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(f, coeff);
        }
        write!(f, "(")?;
        self.num.fmt_with(f, &coeff)?;
        write!(f, ")/(")?;
        self.den.fmt_with(f, &coeff)?;
        write!(f, ")")
    }
}

impl<C: Field> PartialEq for RationalFunction<C> {
    fn eq(&self, other: &Self) -> bool {
        self.vars_with(other).is_ok() && self.cross_eq(other)
    }
}

impl<C: Field> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, |c| c.to_string())
    }
}

impl<C: Field> fmt::Debug for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a, C: Field> Add<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn add(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if let Some(k) = rhs.den.div_exact(&self.den) {
            return RationalFunction::normalized(&(&self.num * &k) + &rhs.num, rhs.den.clone());
        }
        if let Some(k) = self.den.div_exact(&rhs.den) {
            return RationalFunction::normalized(&self.num + &(&rhs.num * &k), self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, C: Field> Sub<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn sub(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self + &(-rhs)
    }
}

impl<'a, C: Field> Mul<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn mul(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.num.is_zero() || rhs.num.is_zero() {
            let _ = self.num.common_vars(&rhs.num);
            return RationalFunction::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den);
        }
        // cross-cancel before multiplying out
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (rhs.num.clone(), rhs.den.clone());
        if d2.as_constant().is_none() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Polynomial::constant(C::one());
            }
        }
        if d1.as_constant().is_none() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Polynomial::constant(C::one());
            }
        }
        RationalFunction::normalized(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a, C: Field> Div<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn div(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        assert!(!rhs.num.is_zero(), "division by the zero rational function");
        let inv = RationalFunction {
            num: rhs.den.clone(),
            den: rhs.num.clone(),
        };
        let inv = RationalFunction::normalized(inv.num, inv.den);
        self * &inv
    }
}

impl<C: Field> Neg for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<C: Field> Neg for RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Field> $tr<RationalFunction<C>> for RationalFunction<C> {
            type Output = RationalFunction<C>;
            fn $m(self, rhs: RationalFunction<C>) -> RationalFunction<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl<C: Field> Zero for RationalFunction<C> {
    fn zero() -> Self {
        RationalFunction::from_poly(Polynomial::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Field> One for RationalFunction<C> {
    fn one() -> Self {
        RationalFunction::constant(C::one())
    }
}

impl<C: Field> Field for RationalFunction<C> {
    fn from_i64(v: i64) -> Self {
        RationalFunction::from_int(v)
    }

    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl<C: Field> From<Polynomial<C>> for RationalFunction<C> {
    fn from(p: Polynomial<C>) -> Self {
        RationalFunction::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::vars_from;
    use crate::{Rational, Rf};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn xy() -> (Vars, Rf, Rf) {
        let v = vars_from(&["x", "y"]);
        (v.clone(), Rf::var(&v, 0), Rf::var(&v, 1))
    }

    fn raw(num: Polynomial<Rational>, den: Polynomial<Rational>) -> Rf {
        // bypass normalization so the unreduced representation is kept
        RationalFunction { num, den }
    }

    #[test]
    fn cross_multiplication_equality() {
        let (v, x, _) = xy();
        let px = Polynomial::var(&v, 0);
        let one = Polynomial::constant_in(&v, q(1));
        let a = raw(&(&px * &px) - &one, &px - &one);
        let b = &x + &Rf::one();
        assert!(a.rf_equal(&b).unwrap());
        let z = raw(Polynomial::zero_in(&v), &px + &one);
        assert!(z.rf_equal(&Rf::zero()).unwrap());
    }

    #[test]
    fn square_over_base() {
        let (v, _, _) = xy();
        let s = &Polynomial::var(&v, 0) + &Polynomial::var(&v, 1);
        let a = raw(&s * &s, s.clone());
        assert!(a.rf_equal(&Rf::from_poly(s)).unwrap());
    }

    #[test]
    fn eval_and_singular_points() {
        let (v, x, y) = xy();
        let f = &x / &(&y + &Rf::one());
        assert_eq!(f.eval(&[q(2), q(1)]).unwrap(), q(1));
        assert_eq!(Rf::one().eval(&[q(5), q(-3)]).unwrap(), q(1));
        let px = Polynomial::var(&v, 0);
        let one = Polynomial::constant_in(&v, q(1));
        let g = raw(&(&px * &px) - &one, &px - &one);
        assert_eq!(g.eval(&[q(1), q(0)]), Err(RingError::SingularPoint));
    }

    #[test]
    fn derivatives() {
        let (_, x, y) = xy();
        let f = &(&x * &x) * &y;
        assert_eq!(f.partial(0), &(&x * &y) * &Rf::from_int(2));
        assert!(x.partial(1).is_zero());
        let g = &x / &(&y + &Rf::one());
        assert_eq!(g.partial(0), &Rf::one() / &(&y + &Rf::one()));
    }

    #[test]
    fn mismatch_is_an_error() {
        let (_, x, _) = xy();
        let w = Rf::var(&vars_from(&["w"]), 0);
        assert_eq!(x.rf_equal(&w), Err(RingError::VariableMismatch));
    }
}
