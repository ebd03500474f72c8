//! Seeded pseudorandom sample points and randomized tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{increasing_tuples, Chart, KForm, KVector, Multi, OneOneTensor, VectorField};
use crate::linalg::Matrix;
use crate::ring::{Monomial, Polynomial};
use crate::{Rational, Rf};

pub const DEFAULT_SAMPLE_COUNT: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5eed;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational with numerator in `-9..=9` and denominator in `1..=3`.
pub fn small_rational(rng: &mut SampleRng) -> Rational {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=3);
    Rational::new(n.into(), d.into())
}

/// `count` points in the chart drawn from `seed`.
pub fn sample_points(seed: u64, dim: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| small_rational(&mut r)).collect())
        .collect()
}

/// Points at which every function in `guards` is finite, drawn from `seed`.
/// Gives up after a bounded number of draws.
pub fn nonsingular_points(
    seed: u64,
    dim: usize,
    count: usize,
    guards: &[&Rf],
) -> Vec<Vec<Rational>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count * 16 {
        if out.len() == count {
            break;
        }
        let p: Vec<Rational> = (0..dim).map(|_| small_rational(&mut r)).collect();
        if guards.iter().all(|g| g.eval(&p).is_ok()) {
            out.push(p);
        }
    }
    out
}

/// Random polynomial with at most `terms` monomials of degree `≤ max_deg`
/// and small integer coefficients.
pub fn random_polynomial(rng: &mut SampleRng, chart: &Chart, max_deg: u32, terms: usize) -> Rf {
    let n = chart.dim();
    let mut p = Polynomial::zero_in(chart.vars());
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        let c: i64 = rng.gen_range(-3..=3);
        let t = Polynomial::from_terms(
            chart.vars(),
            [(
                Monomial::from_exponents(e),
                Rational::from_integer(c.into()),
            )],
        );
        p = &p + &t;
    }
    Rf::from_poly(p)
}

pub fn random_vector_field(rng: &mut SampleRng, chart: &Chart, max_deg: u32) -> VectorField {
    let comps = (0..chart.dim())
        .map(|_| random_polynomial(rng, chart, max_deg, 2))
        .collect();
    VectorField::new(chart, comps)
}

pub fn random_multi<K>(
    rng: &mut SampleRng,
    chart: &Chart,
    degree: usize,
    max_deg: u32,
) -> Multi<K> {
    let entries: Vec<(Vec<usize>, Rf)> = increasing_tuples(chart.dim(), degree)
        .into_iter()
        .map(|idx| (idx, random_polynomial(rng, chart, max_deg, 2)))
        .collect();
    Multi::from_components(chart, degree, entries)
}

pub fn random_form(rng: &mut SampleRng, chart: &Chart, degree: usize, max_deg: u32) -> KForm {
    random_multi(rng, chart, degree, max_deg)
}

pub fn random_multivector(
    rng: &mut SampleRng,
    chart: &Chart,
    degree: usize,
    max_deg: u32,
) -> KVector {
    random_multi(rng, chart, degree, max_deg)
}

pub fn random_tensor(rng: &mut SampleRng, chart: &Chart, max_deg: u32) -> OneOneTensor {
    let n = chart.dim();
    let m = Matrix::from_fn(n, n, |_, _| random_polynomial(rng, chart, max_deg, 1));
    OneOneTensor::new(chart, m)
}

/// Constant-coefficient tensor with entries in `-2..=2`.
pub fn random_constant_tensor(rng: &mut SampleRng, chart: &Chart) -> OneOneTensor {
    let n = chart.dim();
    let m = Matrix::from_fn(n, n, |_, _| Rf::from_int(rng.gen_range(-2..=2)));
    OneOneTensor::new(chart, m)
}
