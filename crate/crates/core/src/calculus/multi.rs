use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::{Rational, Rf};

use super::{fmt_sum, CalculusError, Chart, VectorField};

/// Index kind marker for differential forms (components on `dx^I`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lower;
/// Index kind marker for multivector fields (components on `∂_I`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Upper;

/// Totally antisymmetric tensor stored on strictly increasing index tuples.
/// Zero components are never stored.
pub struct Multi<K> {
    chart: Chart,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Rf>,
    kind: PhantomData<K>,
}

pub type KForm = Multi<Lower>;
pub type KVector = Multi<Upper>;

/// Sort an index tuple; returns the permutation sign, or `None` on a repeat.
pub fn sort_indices(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// All strictly increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

impl<K> Clone for Multi<K> {
    fn clone(&self) -> Self {
        Multi {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self.comps.clone(),
            kind: PhantomData,
        }
    }
}

impl<K> PartialEq for Multi<K> {
    fn eq(&self, other: &Self) -> bool {
        if !self.chart.same(&other.chart) || self.degree != other.degree {
            return false;
        }
        let zero = Rf::zero();
        let keys: std::collections::BTreeSet<&Vec<usize>> =
            self.comps.keys().chain(other.comps.keys()).collect();
        keys.into_iter()
            .all(|k| self.comps.get(k).unwrap_or(&zero) == other.comps.get(k).unwrap_or(&zero))
    }
}

impl<K> Multi<K> {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        Multi {
            chart: chart.clone(),
            degree,
            comps: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// Degree-zero element (a function).
    pub fn function(chart: &Chart, f: Rf) -> Self {
        let mut m = Self::zero(chart, 0);
        m.accumulate(&[], f);
        m
    }

    /// Build from arbitrary (possibly unsorted) index tuples; entries with
    /// repeated indices vanish and duplicates accumulate.
    pub fn from_components(
        chart: &Chart,
        degree: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Rf)>,
    ) -> Self {
        let mut m = Self::zero(chart, degree);
        for (idx, c) in entries {
            assert_eq!(idx.len(), degree, "index tuple length");
            assert!(idx.iter().all(|&i| i < chart.dim()), "index out of range");
            m.accumulate(&idx, c);
        }
        m
    }

    /// Unit element on the given index tuple, e.g. `dx^0 ∧ dx^2`.
    pub fn basis(chart: &Chart, idx: &[usize]) -> Self {
        Self::from_components(chart, idx.len(), [(idx.to_vec(), Rf::one())])
    }

    fn accumulate(&mut self, idx: &[usize], c: Rf) {
        if c.is_zero() {
            return;
        }
        let Some((key, odd)) = sort_indices(idx) else {
            return;
        };
        let c = if odd { -c } else { c };
        let sum = match self.comps.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.comps.insert(key, sum);
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comps(&self) -> &BTreeMap<Vec<usize>, Rf> {
        &self.comps
    }

    /// Component on an arbitrary index tuple, with antisymmetry applied.
    pub fn get(&self, idx: &[usize]) -> Rf {
        match sort_indices(idx) {
            Some((key, odd)) => match self.comps.get(&key) {
                Some(c) if odd => -c,
                Some(c) => c.clone(),
                None => Rf::zero(),
            },
            None => Rf::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(self.chart.same(&other.chart), "chart mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut m = self.clone();
        for (k, c) in &other.comps {
            m.accumulate(k, c.clone());
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_nonzero(|c| -c)
    }

    pub fn scale(&self, f: &Rf) -> Self {
        if f.is_zero() {
            return Self::zero(&self.chart, self.degree);
        }
        self.map_nonzero(|c| c * f)
    }

    fn map_nonzero(&self, f: impl Fn(&Rf) -> Rf) -> Self {
        let mut m = Self::zero(&self.chart, self.degree);
        for (k, c) in &self.comps {
            m.accumulate(k, f(c));
        }
        m
    }

    /// Rewrite every component (e.g. restriction to another chart).
    pub fn map_comps(
        &self,
        chart: &Chart,
        f: impl Fn(&Rf) -> Result<Rf, CalculusError>,
    ) -> Result<Self, CalculusError> {
        let mut m = Self::zero(chart, self.degree);
        for (k, c) in &self.comps {
            m.accumulate(k, f(c)?);
        }
        Ok(m)
    }

    /// Re-index onto another chart; `map[i]` is the new index of frame
    /// direction `i`, `None` drops components involving it.
    pub fn reindex_frame(
        &self,
        chart: &Chart,
        map: &[Option<usize>],
        f: impl Fn(&Rf) -> Result<Rf, CalculusError>,
    ) -> Result<Self, CalculusError> {
        let mut m = Self::zero(chart, self.degree);
        'comps: for (k, c) in &self.comps {
            let mut idx = Vec::with_capacity(k.len());
            for &i in k {
                match map[i] {
                    Some(j) => idx.push(j),
                    None => continue 'comps,
                }
            }
            m.accumulate(&idx, f(c)?);
        }
        Ok(m)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert!(self.chart.same(&other.chart), "chart mismatch");
        let mut m = Self::zero(&self.chart, self.degree + other.degree);
        for (a, ca) in &self.comps {
            for (b, cb) in &other.comps {
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                m.accumulate(&idx, ca * cb);
            }
        }
        m
    }

    /// Exact component values at a point.
    pub fn eval_at(
        &self,
        point: &[Rational],
    ) -> Result<BTreeMap<Vec<usize>, Rational>, CalculusError> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.comps {
            let v = c.eval(point)?;
            if !v.is_zero() {
                out.insert(k.clone(), v);
            }
        }
        Ok(out)
    }

    /// Full antisymmetric matrix `M[i][j]` of a degree-2 element.
    pub fn to_matrix(&self) -> Matrix<Rf> {
        assert_eq!(self.degree, 2, "matrix form needs degree 2");
        let n = self.chart.dim();
        Matrix::from_fn(n, n, |i, j| self.get(&[i, j]))
    }

    /// Degree-2 element from the strictly upper triangle of `m`. Callers
    /// are responsible for checking skew-symmetry first.
    pub fn from_matrix(chart: &Chart, m: &Matrix<Rf>) -> Self {
        let n = chart.dim();
        let mut out = Self::zero(chart, 2);
        for i in 0..n {
            for j in i + 1..n {
                out.accumulate(&[i, j], m[(i, j)].clone());
            }
        }
        out
    }

    /// Sum over components of `coeff(I) · det[rows(a)[I_b]]` for `degree`
    /// arguments, each given by its component vector.
    fn contract_all(&self, args: &[Vec<Rf>]) -> Rf {
        assert_eq!(args.len(), self.degree, "argument count");
        let mut acc = Rf::zero();
        for (k, c) in &self.comps {
            let m = Matrix::from_fn(k.len(), k.len(), |a, b| args[b][k[a]].clone());
            let d = m.determinant();
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// Slot-one contraction with a dual element given by its components.
    fn contract_first(&self, v: &[Rf]) -> Self {
        assert!(self.degree >= 1, "contraction of a degree-0 element");
        let mut m = Self::zero(&self.chart, self.degree - 1);
        for (k, c) in &self.comps {
            // k = (k0 < k1 < ...): moving k_a to the front costs (−1)^a
            for a in 0..k.len() {
                let va = &v[k[a]];
                if va.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = k
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| b != a)
                    .map(|(_, &i)| i)
                    .collect();
                let t = c * va;
                m.accumulate(&rest, if a % 2 == 1 { -t } else { t });
            }
        }
        m
    }
}

impl KForm {
    /// `df` of a function on the chart.
    pub fn differential(chart: &Chart, f: &Rf) -> Self {
        KForm::function(chart, f.clone()).d()
    }

    /// 1-form from its component vector.
    pub fn covector(chart: &Chart, comps: &[Rf]) -> Self {
        KForm::from_components(
            chart,
            1,
            comps.iter().enumerate().map(|(i, c)| (vec![i], c.clone())),
        )
    }

    /// Component vector of a 1-form.
    pub fn covector_comps(&self) -> Vec<Rf> {
        assert_eq!(self.degree, 1);
        (0..self.chart.dim()).map(|i| self.get(&[i])).collect()
    }

    /// Exterior derivative. Overflow past the chart dimension is a zero
    /// of the nominal degree.
    pub fn d(&self) -> Self {
        let n = self.chart.dim();
        let mut m = Self::zero(&self.chart, self.degree + 1);
        for (k, c) in &self.comps {
            for i in 0..n {
                if k.contains(&i) {
                    continue;
                }
                let di = c.partial(i);
                if di.is_zero() {
                    continue;
                }
                let mut idx = Vec::with_capacity(k.len() + 1);
                idx.push(i);
                idx.extend_from_slice(k);
                m.accumulate(&idx, di);
            }
        }
        m
    }

    /// `i(X)ω`, contraction in the first slot.
    pub fn interior(&self, x: &VectorField) -> Self {
        assert!(self.chart.same(x.chart()), "chart mismatch");
        self.contract_first(x.comps())
    }

    /// `ω(X_1, …, X_k)` with the determinant convention.
    pub fn eval(&self, args: &[&VectorField]) -> Rf {
        let rows: Vec<Vec<Rf>> = args.iter().map(|x| x.comps().to_vec()).collect();
        self.contract_all(&rows)
    }

    /// Lie derivative `L_X ω` by the coordinate formula.
    pub fn lie(&self, x: &VectorField) -> Self {
        assert!(self.chart.same(x.chart()), "chart mismatch");
        let n = self.chart.dim();
        let dx: Vec<Vec<Rf>> = (0..n)
            .map(|i| (0..n).map(|a| x.comp(i).partial(a)).collect())
            .collect();
        let mut m = Self::zero(&self.chart, self.degree);
        for idx in increasing_tuples(n, self.degree) {
            let mut acc = x.apply(&self.get(&idx));
            for a in 0..idx.len() {
                for i in 0..n {
                    let dxi = &dx[i][idx[a]];
                    if dxi.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[a] = i;
                    let w = self.get(&j);
                    if !w.is_zero() {
                        acc = &acc + &(&w * dxi);
                    }
                }
            }
            m.accumulate(&idx, acc);
        }
        m
    }
}

impl KVector {
    /// Vector field as a 1-vector.
    pub fn from_vector(x: &VectorField) -> Self {
        KVector::from_components(
            x.chart(),
            1,
            x.comps()
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i], c.clone())),
        )
    }

    pub fn to_vector(&self) -> VectorField {
        assert_eq!(self.degree, 1);
        VectorField::new(
            &self.chart,
            (0..self.chart.dim()).map(|i| self.get(&[i])).collect(),
        )
    }

    /// `i(α)P`, contraction in the first slot.
    pub fn interior(&self, alpha: &KForm) -> Self {
        assert!(self.chart.same(alpha.chart()), "chart mismatch");
        self.contract_first(&alpha.covector_comps())
    }

    /// `P(α_1, …, α_k)` with the determinant convention.
    pub fn eval(&self, args: &[&KForm]) -> Rf {
        let rows: Vec<Vec<Rf>> = args.iter().map(|a| a.covector_comps()).collect();
        self.contract_all(&rows)
    }

    /// Lie derivative `L_X P` by the coordinate formula.
    pub fn lie(&self, x: &VectorField) -> Self {
        assert!(self.chart.same(x.chart()), "chart mismatch");
        let n = self.chart.dim();
        let mut m = Self::zero(&self.chart, self.degree);
        for idx in increasing_tuples(n, self.degree) {
            let mut acc = x.apply(&self.get(&idx));
            for a in 0..idx.len() {
                for i in 0..n {
                    let d = x.comp(idx[a]).partial(i);
                    if d.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[a] = i;
                    let p = self.get(&j);
                    if !p.is_zero() {
                        acc = &acc - &(&p * &d);
                    }
                }
            }
            m.accumulate(&idx, acc);
        }
        m
    }

    /// Schouten–Nijenhuis bracket, computed on superfunctions in odd
    /// frame variables `ξ_i` with right derivatives `P∂⃖_i`:
    /// `[P,Q] = Σ_i (P∂⃖_i)(∂_i Q) − (−1)^{(p−1)(q−1)} (Q∂⃖_i)(∂_i P)`.
    /// Normalized so that `[X,P] = L_X P` and `[X,f] = X(f)`.
    pub fn schouten(&self, other: &Self) -> Self {
        assert!(self.chart.same(other.chart()), "chart mismatch");
        let (p, q) = (self.degree, other.degree);
        let n = self.chart.dim();
        let nominal = (p + q).saturating_sub(1);
        let mut m = Self::zero(&self.chart, nominal);
        if p + q == 0 {
            return m;
        }
        // (−1)^{(p−1)(q−1)} is −1 exactly when p and q are both even
        let graded_plus = !(p % 2 == 0 && q % 2 == 0);
        for i in 0..n {
            let dp = self.xi_derivative(i);
            let dq = other.xi_derivative(i);
            let pq = other.partial_coeffs(i);
            let pp = self.partial_coeffs(i);
            let t1 = dp.wedge(&pq);
            let t2 = dq.wedge(&pp);
            for (k, c) in t1.comps {
                m.accumulate(&k, c);
            }
            for (k, c) in t2.comps {
                m.accumulate(&k, if graded_plus { -c } else { c });
            }
        }
        m
    }

    /// Right derivative in the odd variable `ξ_i`.
    fn xi_derivative(&self, i: usize) -> Self {
        let mut m = Self::zero(&self.chart, self.degree.saturating_sub(1));
        for (k, c) in &self.comps {
            if let Some(a) = k.iter().position(|&j| j == i) {
                let mut rest = k.clone();
                rest.remove(a);
                let odd = (k.len() - 1 - a) % 2 == 1;
                m.accumulate(&rest, if odd { -c } else { c.clone() });
            }
        }
        m
    }

    fn partial_coeffs(&self, i: usize) -> Self {
        let mut m = Self::zero(&self.chart, self.degree);
        for (k, c) in &self.comps {
            m.accumulate(k, c.partial(i));
        }
        m
    }
}

impl<K: FrameToken> fmt::Display for Multi<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.comps.iter().map(|(k, c)| {
            let basis = if k.is_empty() {
                String::new()
            } else {
                k.iter()
                    .map(|&i| K::token(self.chart.coord(i)))
                    .collect::<Vec<_>>()
                    .join("^")
            };
            (c, basis)
        });
        fmt_sum(f, terms)
    }
}

impl<K: FrameToken> fmt::Debug for Multi<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Surface spelling of frame elements: `dx` for forms, `xv` for vectors.
pub trait FrameToken {
    fn token(coord: &str) -> String;
}

impl FrameToken for Lower {
    fn token(coord: &str) -> String {
        format!("d{coord}")
    }
}

impl FrameToken for Upper {
    fn token(coord: &str) -> String {
        format!("{coord}v")
    }
}
