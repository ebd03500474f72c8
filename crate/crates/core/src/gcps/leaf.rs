use num_traits::{One, Zero};

use crate::calculus::KForm;
use crate::linalg::{span_rank, Matrix};
use crate::ring::Field;
use crate::{Rational, Rf};

use super::{Epsilon, Gcps, GcpsError};

/// Pointwise normal form of Φ along a leaf of π.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafNormalForm {
    /// Columns: the leaf tangent vectors, then the normal vectors.
    pub frame: Matrix<Rational>,
    /// The successive constant B-fields in the chart coordinates.
    pub b_fields: Vec<KForm>,
    /// The same B-fields in the adapted frame.
    pub b_adapted: Vec<Matrix<Rational>>,
    /// Φ at the point, in the adapted frame, before the gauges.
    pub initial: Matrix<Rational>,
    /// Φ after all gauges, in the adapted frame.
    pub normal_form: Matrix<Rational>,
    pub leaf_block: Matrix<Rational>,
    pub normal_block: Matrix<Rational>,
    pub block_diagonal: bool,
    /// Leaf block is `[[0, ♯π], [−ε♭ϖ, 0]]` with `♭ϖ∘♯π = −Id`.
    pub leaf_is_symplectic: bool,
    /// Normal block is `[[A, 0], [0, −ᵗA]]`.
    pub normal_is_classical: bool,
    pub label: Option<String>,
}

pub const ZERO_EXTENSION_LABEL: &str =
    "subtangent: normal B fixed on im A' only, free parameters set to zero";

/// `(A + P♭B, S − ♭B P ♭B − ♭B A − ᵗA ♭B)`.
fn gauge_blocks<F: Field>(
    a: &Matrix<F>,
    p: &Matrix<F>,
    s: &Matrix<F>,
    fb: &Matrix<F>,
) -> (Matrix<F>, Matrix<F>) {
    let a2 = a.add(&p.mul(fb));
    let s2 = s
        .sub(&fb.mul(p).mul(fb))
        .sub(&fb.mul(a))
        .sub(&a.transpose().mul(fb));
    (a2, s2)
}

fn big<F: Field>(a: &Matrix<F>, p: &Matrix<F>, s: &Matrix<F>) -> Matrix<F> {
    Matrix::from_blocks(a, p, s, &a.transpose().neg())
}

fn sub_matrix<F: Field>(m: &Matrix<F>, rows: &[usize], cols: &[usize]) -> Matrix<F> {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])].clone())
}

fn embed<F: Field>(n: usize, m: &Matrix<F>, idx: &[usize]) -> Matrix<F> {
    Matrix::from_fn(n, n, |i, j| {
        match (
            idx.iter().position(|&r| r == i),
            idx.iter().position(|&c| c == j),
        ) {
            (Some(a), Some(b)) => m[(a, b)].clone(),
            _ => F::zero(),
        }
    })
}

/// Gauges `Φ` at `point` into symplectic-on-leaf ⊕ c.p.s.-on-normal form.
/// The leaf vectors must span `im ♯π` there, and together with the normal
/// vectors they must span the tangent space.
pub fn leaf_normal_form(
    g: &Gcps,
    point: &[Rational],
    leaf_tangent: &[Vec<Rational>],
    normal: &[Vec<Rational>],
) -> Result<LeafNormalForm, GcpsError> {
    let n = g.chart().dim();
    let k = leaf_tangent.len();
    let precondition = |what, witness: String| GcpsError::Precondition { what, witness };
    if k + normal.len() != n || leaf_tangent.iter().chain(normal).any(|v| v.len() != n) {
        return Err(GcpsError::Dimension(format!(
            "{k} leaf and {} normal vectors in dimension {n}",
            normal.len()
        )));
    }
    let ev = |m: &Matrix<Rf>| {
        m.try_map(|f| f.eval(point))
            .map_err(|e| GcpsError::Calculus(e.into()))
    };
    let a = ev(g.a().matrix())?;
    let p = ev(&g.sharp_matrix())?;
    let s = ev(&g.flat_matrix())?;

    let cols: Vec<Vec<Rational>> = leaf_tangent.iter().chain(normal).cloned().collect();
    let t = Matrix::from_columns(n, &cols);
    let t_inv = t.inverse().ok_or_else(|| {
        precondition(
            "leaf and normal vectors do not span",
            format!("rank {}", t.rank()),
        )
    })?;
    let p_cols: Vec<Vec<Rational>> = (0..n).map(|j| p.column(j)).collect();
    let image_rank = span_rank(&p_cols, n);
    let joint: Vec<Vec<Rational>> = leaf_tangent.iter().chain(&p_cols).cloned().collect();
    if image_rank != k || span_rank(&joint, n) != k {
        return Err(precondition(
            "leaf tangent is not the image of the sharp map",
            format!("rank of image {image_rank}, leaf vectors {k}"),
        ));
    }

    // adapted frame: vectors x = T x̃, covectors α̃ = ᵀT α
    let at = t_inv.mul(&a).mul(&t);
    let pt = t_inv.mul(&p).mul(&t_inv.transpose());
    let st = t.transpose().mul(&s).mul(&t);
    let initial = big(&at, &pt, &st);
    let leaf: Vec<usize> = (0..k).collect();
    let norm: Vec<usize> = (k..n).collect();

    // step 1: ♭B|_ν = φ with ♯π φ(V) = −pr_TS A V
    let p0 = sub_matrix(&pt, &leaf, &leaf);
    let p0_inv = p0.inverse().expect("sharp map is invertible on its image");
    let a12 = sub_matrix(&at, &leaf, &norm);
    let phi = p0_inv.mul(&a12).neg();
    let fb1 = Matrix::from_fn(n, n, |i, j| match (i < k, j < k) {
        (true, false) => phi[(i, j - k)].clone(),
        (false, true) => -phi[(j, i - k)].clone(),
        _ => Rational::zero(),
    });
    let (a1, s1) = gauge_blocks(&at, &pt, &st, &fb1);

    // step 2 on the leaf: B = ϖ_{A'} with ♭ϖ = −P0⁻¹
    let w0 = p0_inv.neg();
    let fb2 = embed(n, &w0.mul(&sub_matrix(&a1, &leaf, &leaf)), &leaf);
    let (a2, s2) = gauge_blocks(&a1, &pt, &s1, &fb2);

    // step 3 on the normal part: B(A'V1, V2) = ½σ'(V1, V2)
    let nn = n - k;
    let n_a = sub_matrix(&a2, &norm, &norm);
    let sigma_n = sub_matrix(&s2, &norm, &norm).transpose();
    let half = Rational::new(1.into(), 2.into());
    let mut label = None;
    let bm = if g.epsilon() != Epsilon::Subtangent {
        n_a.transpose()
            .inverse()
            .expect("A' is invertible on the normal part")
            .mul(&sigma_n)
            .scale(&half)
    } else {
        label = Some(ZERO_EXTENSION_LABEL.to_string());
        solve_skew(&n_a, &sigma_n.scale(&half)).ok_or_else(|| {
            precondition(
                "no normal B-field solves B(A'V1,V2) = σ'(V1,V2)/2",
                String::new(),
            )
        })?
    };
    let fb3 = embed(n, &bm.transpose(), &norm);
    let (a3, s3) = gauge_blocks(&a2, &pt, &s2, &fb3);
    let final_big = big(&a3, &pt, &s3);

    let leaf_idx: Vec<usize> = leaf
        .iter()
        .copied()
        .chain(leaf.iter().map(|i| n + i))
        .collect();
    let norm_idx: Vec<usize> = norm
        .iter()
        .copied()
        .chain(norm.iter().map(|i| n + i))
        .collect();
    let leaf_block = sub_matrix(&final_big, &leaf_idx, &leaf_idx);
    let normal_block = sub_matrix(&final_big, &norm_idx, &norm_idx);
    let block_diagonal = sub_matrix(&final_big, &leaf_idx, &norm_idx).is_zero()
        && sub_matrix(&final_big, &norm_idx, &leaf_idx).is_zero();
    let eps = Rational::from(num_bigint::BigInt::from(g.epsilon().value()));
    let expected_leaf = big(&Matrix::zeros(k, k), &p0, &w0.scale(&eps).neg());
    let n_final = sub_matrix(&a3, &norm, &norm);
    let expected_normal = big(&n_final, &Matrix::zeros(nn, nn), &Matrix::zeros(nn, nn));

    let fbs = [fb1, fb2, fb3];
    let b_adapted: Vec<Matrix<Rational>> = fbs.iter().map(|fb| fb.transpose()).collect();
    let b_fields = b_adapted
        .iter()
        .map(|b| {
            let orig = t_inv.transpose().mul(b).mul(&t_inv);
            KForm::from_matrix(g.chart(), &orig.map(|q| Rf::constant(q.clone())))
        })
        .collect();
    Ok(LeafNormalForm {
        frame: t,
        b_fields,
        b_adapted,
        initial,
        leaf_is_symplectic: leaf_block == expected_leaf,
        normal_is_classical: normal_block == expected_normal,
        normal_form: final_big,
        leaf_block,
        normal_block,
        block_diagonal,
        label,
    })
}

/// Skew `B` with `ᵀN B = R`, free parameters set to zero.
fn solve_skew(n: &Matrix<Rational>, r: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    let m = n.rows();
    let unknowns: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let basis = |u: usize| {
        let (i, j) = unknowns[u];
        Matrix::from_fn(m, m, |a, b| {
            if (a, b) == (i, j) {
                Rational::one()
            } else if (a, b) == (j, i) {
                -Rational::one()
            } else {
                Rational::zero()
            }
        })
    };
    let images: Vec<Matrix<Rational>> = (0..unknowns.len())
        .map(|u| n.transpose().mul(&basis(u)))
        .collect();
    let coeffs = Matrix::from_fn(m * m, unknowns.len(), |row, u| {
        images[u][(row / m, row % m)].clone()
    });
    let rhs: Vec<Rational> = (0..m * m)
        .map(|row| r[(row / m, row % m)].clone())
        .collect();
    if unknowns.is_empty() {
        return r.is_zero().then(|| Matrix::zeros(m, m));
    }
    let x = coeffs.solve(&rhs)?;
    Some((0..unknowns.len()).fold(Matrix::zeros(m, m), |acc, u| {
        acc.add(&basis(u).scale(&x[u]))
    }))
}
