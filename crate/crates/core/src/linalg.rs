//! Dense matrices over an exact field with fraction-free elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::ring::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Upper echelon form produced by Bareiss elimination.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub matrix: Matrix<F>,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
    /// Parity of the row permutation applied.
    pub swaps: usize,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(len, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let b = &other[(k, j)];
                if b.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * b.clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for k in 0..self.cols {
                    if self[(i, k)].is_zero() || v[k].is_zero() {
                        continue;
                    }
                    acc = acc + self[(i, k)].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn neg(&self) -> Matrix<F> {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|x| !x.is_zero())
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<F> {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Assemble a 2x2 block matrix.
    pub fn from_blocks(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, d: &Matrix<F>) -> Matrix<F> {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r, cl) = (a.rows + c.rows, a.cols + b.cols);
        Self::from_fn(r, cl, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - a.cols)].clone(),
            (false, true) => c[(i - a.rows, j)].clone(),
            (false, false) => d[(i - a.rows, j - a.cols)].clone(),
        })
    }

    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Bareiss fraction-free elimination to upper echelon form. Pivots are
    /// chosen by least row index.
    pub fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = F::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
                swaps += 1;
            }
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                let lead = m[(i, c)].clone();
                for j in c + 1..m.cols {
                    let v = piv.clone() * m[(i, j)].clone() - lead.clone() * m[(r, j)].clone();
                    m[(i, j)] = v.div_exact(&prev);
                }
                m[(i, c)] = F::zero();
            }
            pivots.push((r, c));
            prev = piv;
            r += 1;
        }
        Echelon {
            matrix: m,
            pivots,
            swaps,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return F::one();
        }
        let e = self.echelon();
        if e.pivots.len() < self.rows {
            return F::zero();
        }
        let d = e.matrix[(self.rows - 1, self.cols - 1)].clone();
        if e.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Matrix<F> {
        Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let ii = if i < skip_r { i } else { i + 1 };
            let jj = if j < skip_c { j } else { j + 1 };
            self[(ii, jj)].clone()
        })
    }

    pub fn adjugate(&self) -> Matrix<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).determinant();
            if (i + j) % 2 == 1 {
                -c
            } else {
                c
            }
        })
    }

    /// Inverse via adjugate and determinant; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        let det = self.determinant();
        let inv = det.inverse()?;
        Some(self.adjugate().scale(&inv))
    }

    /// A particular solution of `self * x = b` (free variables zero), or
    /// `None` if the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let e = aug.echelon();
        if e.pivots.iter().any(|&(_, c)| c == self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for &(r, c) in e.pivots.iter().rev() {
            let mut acc = e.matrix[(r, self.cols)].clone();
            for j in c + 1..self.cols {
                if !e.matrix[(r, j)].is_zero() && !x[j].is_zero() {
                    acc = acc - e.matrix[(r, j)].clone() * x[j].clone();
                }
            }
            x[c] = acc / e.matrix[(r, c)].clone();
        }
        Some(x)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let e = self.echelon();
        let pivot_cols: Vec<usize> = e.pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|c| !pivot_cols.contains(c)) {
            let mut x = vec![F::zero(); self.cols];
            x[f] = F::one();
            for &(r, c) in e.pivots.iter().rev() {
                let mut acc = F::zero();
                for j in c + 1..self.cols {
                    if !e.matrix[(r, j)].is_zero() && !x[j].is_zero() {
                        acc = acc - e.matrix[(r, j)].clone() * x[j].clone();
                    }
                }
                x[c] = acc / e.matrix[(r, c)].clone();
            }
            basis.push(x);
        }
        basis
    }

    /// Indices of a maximal linearly independent subset of the columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots.iter().map(|&(_, c)| c).collect()
    }
}

/// Rank of a list of vectors.
pub fn span_rank<F: Field>(vectors: &[Vec<F>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(len, vectors).rank()
}

/// Coefficients expressing `v` in terms of `generators`, if it lies in their span.
pub fn span_coefficients<F: Field>(generators: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    if generators.is_empty() {
        return v.iter().all(F::is_zero).then(Vec::new);
    }
    Matrix::from_columns(v.len(), generators).solve(v)
}

/// Prune a generator list to an independent subset (least-index choice).
pub fn prune_to_basis<F: Field>(vectors: &[Vec<F>], len: usize) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_columns(len, vectors)
        .independent_columns()
        .into_iter()
        .map(|j| vectors[j].clone())
        .collect()
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<_> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .collect();
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}
