use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::field::Field;
use super::RingError;

/// Ordered coordinate names a polynomial is written in. An empty list marks a
/// universal constant that combines with any variable list.
pub type Vars = Arc<[String]>;

pub fn vars_from<S: AsRef<str>>(names: &[S]) -> Vars {
    names
        .iter()
        .map(|s| s.as_ref().to_string())
        .collect::<Vec<_>>()
        .into()
}

pub(crate) fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial<C> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Field> Polynomial<C> {
    pub fn zero_in(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Polynomial {
            vars: Vars::from(Vec::<String>::new()),
            terms,
        }
    }

    pub fn constant_in(vars: &Vars, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(vars.len(), i), C::one());
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Polynomial::zero_in(vars);
        for (m, c) in terms {
            assert_eq!(
                m.0.len(),
                vars.len(),
                "monomial arity does not match variables"
            );
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_universal(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.as_constant(), Some(c) if c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Re-express over `vars`. Only universal constants may change lists.
    pub fn lift(&self, vars: &Vars) -> Self {
        if same_vars(&self.vars, vars) {
            return self.clone();
        }
        assert!(
            self.vars.is_empty(),
            "variable-list mismatch: {:?} vs {:?}",
            self.vars,
            vars
        );
        let mut p = Polynomial::zero_in(vars);
        for c in self.terms.values() {
            p.add_term(Monomial::one(vars.len()), c.clone());
        }
        p
    }

    pub(crate) fn common_vars(&self, other: &Self) -> Result<Vars, RingError> {
        if same_vars(&self.vars, &other.vars) || other.vars.is_empty() {
            Ok(self.vars.clone())
        } else if self.vars.is_empty() {
            Ok(other.vars.clone())
        } else {
            Err(RingError::VariableMismatch)
        }
    }

    fn binary_vars(&self, other: &Self) -> Vars {
        self.common_vars(other).unwrap_or_else(|_| {
            panic!(
                "variable-list mismatch: {:?} vs {:?}",
                self.vars, other.vars
            )
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Polynomial::zero_in(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::constant(C::one()).lift(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        if self.vars.is_empty() {
            return Polynomial::zero_in(&self.vars);
        }
        let mut p = Polynomial::zero_in(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.0.clone();
            nm[i] -= 1;
            p.add_term(Monomial(nm), c.clone() * C::from_i64(e as i64));
        }
        p
    }

    /// Exact evaluation; `point` is indexed like `vars`.
    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute `subs[i]` for variable `i`; result lives over `target`.
    pub fn substitute(&self, subs: &[Polynomial<C>], target: &Vars) -> Self {
        if self.vars.is_empty() {
            return self.lift(target);
        }
        assert_eq!(subs.len(), self.vars.len());
        let subs: Vec<Polynomial<C>> = subs.iter().map(|s| s.lift(target)).collect();
        let mut cache: Vec<Vec<Polynomial<C>>> = subs
            .iter()
            .map(|s| vec![Polynomial::constant_in(target, C::one()), s.clone()])
            .collect();
        let mut out = Polynomial::zero_in(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant_in(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap() * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-index variables: `map[i]` is the target position of variable `i`,
    /// or `None` if that variable is set to zero.
    pub fn reindex(&self, map: &[Option<usize>], target: &Vars) -> Self {
        if self.vars.is_empty() {
            return self.lift(target);
        }
        let mut p = Polynomial::zero_in(target);
        'terms: for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &ei) in m.0.iter().enumerate() {
                match map[i] {
                    Some(j) => e[j] += ei,
                    None if ei > 0 => continue 'terms,
                    None => {}
                }
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Quotient if `other` divides `self` exactly, else `None`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let vars = self.binary_vars(other);
        let num = self.lift(&vars);
        let den = other.lift(&vars);
        if let Some(c) = den.as_constant() {
            return Some(num.scale(&(C::one() / c)));
        }
        let (lm, lc) = {
            let (m, c) = den.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = num;
        let mut quot = Polynomial::zero_in(&vars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c.clone() / lc.clone();
            let mut step = Polynomial::zero_in(&vars);
            step.add_term(qm, qc);
            rem = &rem - &(&step * &den);
            quot = &quot + &step;
        }
        Some(quot)
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut p = Polynomial::zero_in(&self.vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn leading_coeff(&self) -> C {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    pub fn fmt_with(
        &self,
        f: &mut fmt::Formatter<'_>,
        coeff: impl Fn(&C) -> String,
    ) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut cs = coeff(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mono = self.monomial_string(m);
            match (cs.as_str(), mono.is_empty()) {
                (_, true) => write!(f, "{}", cs)?,
                ("1", false) => write!(f, "{}", mono)?,
                (_, false) if cs.contains('/') => write!(f, "({})*{}", cs, mono)?,
                (_, false) => write!(f, "{}*{}", cs, mono)?,
            }
        }
        Ok(())
    }

    pub fn monomial_string(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }
}

impl<C: Field> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        match self.common_vars(other) {
            Ok(v) => self.lift(&v).terms == other.lift(&v).terms,
            Err(_) => false,
        }
    }
}

impl<C: Field> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, |c| c.to_string())
    }
}

impl<C: Field> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a, C: Field> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let vars = self.binary_vars(rhs);
        let mut out = self.lift(&vars);
        let rhs = rhs.lift(&vars);
        for (m, c) in rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a, C: Field> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let vars = self.binary_vars(rhs);
        let mut out = self.lift(&vars);
        let rhs = rhs.lift(&vars);
        for (m, c) in rhs.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<'a, C: Field> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let vars = self.binary_vars(rhs);
        let a = self.lift(&vars);
        let b = rhs.lift(&vars);
        let mut out = Polynomial::zero_in(&vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Field> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Field> $tr<Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: Polynomial<C>) -> Polynomial<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<C: Field> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Field> Zero for Polynomial<C> {
    fn zero() -> Self {
        Polynomial::constant(C::zero())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Field> One for Polynomial<C> {
    fn one() -> Self {
        Polynomial::constant(C::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn xy() -> (Vars, Polynomial<Rational>, Polynomial<Rational>) {
        let v = vars_from(&["x", "y"]);
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn grlex_leading_term() {
        let (_, x, y) = xy();
        let p = &(&x * &y) + &x.pow(2);
        let (m, _) = p.leading_term().unwrap();
        assert_eq!(m.exponents(), &[2, 0]);
        assert_eq!(p.to_string(), "x^2 + x*y");
    }

    #[test]
    fn exact_division() {
        let (v, x, y) = xy();
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.div_exact(&s).unwrap(), s);
        let one = Polynomial::constant_in(&v, q(1));
        assert!((&sq + &one).div_exact(&s).is_none());
    }

    #[test]
    fn universal_constants_combine() {
        let (_, x, _) = xy();
        let p = &x + &Polynomial::constant(q(3));
        assert_eq!(p.eval(&[q(2), q(0)]), q(5));
        assert_eq!(p.partial(0), Polynomial::constant(q(1)));
    }

    #[test]
    fn reindex_drops_zeroed() {
        let (_, x, y) = xy();
        let p = &(&x * &y) + &x;
        let t = vars_from(&["x"]);
        let r = p.reindex(&[Some(0), None], &t);
        assert_eq!(r, Polynomial::var(&t, 0));
    }

    #[test]
    #[should_panic(expected = "variable-list mismatch")]
    fn mismatched_lists_panic() {
        let (_, x, _) = xy();
        let w = Polynomial::<Rational>::var(&vars_from(&["w"]), 0);
        let _ = &x + &w;
    }
}
