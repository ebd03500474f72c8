//! One line per acceptance criterion; exits nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;

use gencps::calculus::{one_form_bracket, poisson_bracket};
use gencps::courant::{courant_nijenhuis_torsion, torsion_frame_report, BigEndo, BigSection};
use gencps::gcps::{
    classical_structure, direct_sum, gauge_endo, gauge_transform, gauge_transform_algebraic,
    gcps_to_hitchin, hitchin_to_gcps, integrability_check, magri_residual, opposite,
    phi_w_eigencheck, symplectic_structure, Epsilon, Gcps, HitchinPair, Overall, SymplecticVariant,
};
use gencps::reduction::{
    controlled_extension, gcps_reduce, hitchin_reduce, poisson_reduce, reduce_via_enlarged,
    reduce_via_pseudonormal, translation_momentum_reduction, ControlBundle, Extension,
    FoliationSpec, SubmanifoldSpec,
};
use gencps::sample::{
    random_form, random_multivector, random_polynomial, random_vector_field, rng, sample_points,
};
use gencps::submanifold::{induced_structure, poisson_dirac_check, quasi_invariant_check};
use gencps::{Chart, KForm, KVector, Matrix, OneOneTensor, Rf, VectorField};
use num_traits::Zero;

const SEED: u64 = 0x5eed;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn r2() -> Chart {
    Chart::of("R2", &["x", "y"])
}

fn r3() -> Chart {
    Chart::of("R3", &["a", "b", "c"])
}

fn r4() -> Chart {
    Chart::of("R4", &["q1", "p1", "q2", "p2"])
}

fn int(v: i64) -> Rf {
    Rf::from_int(v)
}

fn matrix(c: &Chart, rows: &[&[Rf]]) -> OneOneTensor {
    OneOneTensor::new(
        c,
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()),
    )
}

fn std_w4(c: &Chart) -> KForm {
    KForm::basis(c, &[0, 1]).add(&KForm::basis(c, &[2, 3]))
}

fn std_pi4(c: &Chart) -> KVector {
    KVector::basis(c, &[0, 1]).add(&KVector::basis(c, &[2, 3]))
}

fn sympl(w: &KForm, eps: Epsilon, v: SymplecticVariant) -> Gcps {
    symplectic_structure(w, eps, v).unwrap()
}

fn j4(c: &Chart) -> OneOneTensor {
    let (o, z) = (int(1), int(0));
    let m = int(-1);
    matrix(
        c,
        &[
            &[z.clone(), m.clone(), z.clone(), z.clone()],
            &[o.clone(), z.clone(), z.clone(), z.clone()],
            &[z.clone(), z.clone(), z.clone(), m],
            &[z.clone(), z.clone(), o, z],
        ],
    )
}

struct Instance {
    name: &'static str,
    g: Gcps,
    integrable: bool,
}

/// Valid structures with ε = ±1; the last four are designed to fail.
fn corpus() -> Vec<Instance> {
    use Epsilon::{Complex, Paracomplex};
    use SymplecticVariant::{First, Second};
    let (c2, c3, c4) = (r2(), r3(), r4());
    let u = Chart::of("U2", &["u", "v"]);
    let dxdy = KForm::basis(&c2, &[0, 1]);
    let w4 = std_w4(&c4);
    let j2 = matrix(&u, &[&[int(0), int(-1)], &[int(1), int(0)]]);
    let exact_b = KForm::covector(&c4, &[int(0), &c4.x(0) * &c4.x(2), int(0), int(0)]).d();
    let q2 = c4.x(2);
    let twisted_a = OneOneTensor::scalar(&c4, q2.clone());
    let twisted_sigma = w4.scale(&(&(&q2 * &q2) + &int(1)));
    let a = c3.x(0);
    let non_poisson = KVector::basis(&c3, &[0, 1])
        .add(&KVector::basis(&c3, &[1, 2]))
        .add(&KVector::basis(&c3, &[2, 0]).scale(&a));
    let product = matrix(
        &c3,
        &[
            &[int(1), int(0), int(0)],
            &[int(0), int(1), int(0)],
            &[int(0), &a * &int(2), int(-1)],
        ],
    );
    let ok = |name, g| Instance {
        name,
        g,
        integrable: true,
    };
    let bad = |name, g| Instance {
        name,
        g,
        integrable: false,
    };
    vec![
        ok(
            "symplectic plane, first, complex",
            sympl(&dxdy, Complex, First),
        ),
        ok(
            "symplectic plane, second, complex",
            sympl(&dxdy, Complex, Second),
        ),
        ok(
            "symplectic plane, first, paracomplex",
            sympl(&dxdy, Paracomplex, First),
        ),
        ok(
            "symplectic plane, second, paracomplex",
            sympl(&dxdy, Paracomplex, Second),
        ),
        ok("symplectic R4, first, complex", sympl(&w4, Complex, First)),
        ok(
            "symplectic R4, second, paracomplex",
            sympl(&w4, Paracomplex, Second),
        ),
        ok(
            "constant complex structure",
            classical_structure(&j4(&c4), Complex).unwrap(),
        ),
        ok(
            "constant product structure",
            classical_structure(
                &matrix(&c2, &[&[int(1), int(0)], &[int(0), int(-1)]]),
                Paracomplex,
            )
            .unwrap(),
        ),
        ok(
            "exact gauge of symplectic R4",
            gauge_transform(&sympl(&w4, Complex, First), &exact_b).unwrap(),
        ),
        ok(
            "symplectic plane plus complex plane",
            direct_sum(
                &sympl(&dxdy, Complex, First),
                &classical_structure(&j2, Complex).unwrap(),
            )
            .unwrap(),
        ),
        ok(
            "opposite of symplectic R4",
            opposite(&sympl(&w4, Complex, First)),
        ),
        bad(
            "non-integrable product structure",
            classical_structure(&product, Paracomplex).unwrap(),
        ),
        bad(
            "non-closed compatible form",
            Gcps::assemble(Complex, twisted_a, std_pi4(&c4), twisted_sigma).unwrap(),
        ),
        bad(
            "gauge by a non-closed form",
            gauge_transform_algebraic(
                &sympl(&w4, Complex, First),
                &KForm::basis(&c4, &[1, 2]).scale(&c4.x(0)),
            )
            .unwrap(),
        ),
        bad(
            "non-Poisson bivector with A = Id",
            Gcps::assemble(
                Paracomplex,
                OneOneTensor::identity(&c3),
                non_poisson,
                KForm::zero(&c3, 2),
            )
            .unwrap(),
        ),
    ]
}

fn criterion_1() -> Verdict {
    let corpus = corpus();
    let mut failures = 0;
    for inst in &corpus {
        let r = integrability_check(&inst.g);
        let t = torsion_frame_report(&inst.g.to_big_endo(), None);
        ensure(
            t.conclusive,
            format!("{}: torsion table not conclusive", inst.name),
        )?;
        ensure(
            t.all_zero == r.all_pass(),
            format!(
                "{}: torsion {} vs conditions {}",
                inst.name,
                t.all_zero,
                r.all_pass()
            ),
        )?;
        ensure(
            r.all_pass() == inst.integrable,
            format!("{}: expected integrable = {}", inst.name, inst.integrable),
        )?;
        if !inst.integrable {
            failures += 1;
        }
    }
    ensure(corpus.len() >= 12 && failures >= 3, "corpus too small")?;
    Ok(format!(
        "torsion table and integrability conditions agree on {} instances ({failures} designed failures)",
        corpus.len()
    ))
}

fn criterion_2() -> Verdict {
    let mut r = rng(SEED);
    let mut checked = 0;
    for inst in corpus() {
        let phi = inst.g.to_big_endo();
        let frame = BigSection::frame(phi.chart());
        let m = frame.len();
        for k in 0..5 {
            let f = random_polynomial(&mut r, phi.chart(), 2, 3);
            let (i, j) = (k % m, (3 * k + 1) % m);
            let lhs =
                courant_nijenhuis_torsion(&phi, &frame[i], &frame[j].scale(&f), None).unwrap();
            let rhs = courant_nijenhuis_torsion(&phi, &frame[i], &frame[j], None)
                .unwrap()
                .scale(&f);
            ensure(
                lhs == rhs,
                format!("{}: torsion not tensorial on ({i}, {j})", inst.name),
            )?;
            checked += 1;
        }
    }
    let c = r2();
    let (z, mut p) = (Matrix::zeros(2, 2), Matrix::zeros(2, 2));
    p[(0, 0)] = int(1);
    let bad = BigEndo::from_blocks(&c, &z, &p, &z, &z);
    let frame = BigSection::frame(&c);
    let f = c.x(0);
    let residual = courant_nijenhuis_torsion(&bad, &frame[2], &frame[2].scale(&f), None)
        .unwrap()
        .sub(
            &courant_nijenhuis_torsion(&bad, &frame[2], &frame[2], None)
                .unwrap()
                .scale(&f),
        );
    ensure(!residual.is_zero(), "non-skew residual vanished")?;
    let rep = torsion_frame_report(&bad, None);
    ensure(
        !rep.conclusive && rep.label.is_some(),
        "non-skew report not labelled",
    )?;
    Ok(format!(
        "torsion is tensorial on {checked} randomized checks; non-skew endomorphism has residual {residual:?} and is labelled non-conclusive"
    ))
}

fn criterion_3() -> Verdict {
    let c = r3();
    let mut r = rng(SEED + 3);
    for k in 0..10 {
        let pi = random_multivector(&mut r, &c, 2, 2);
        let sigma = random_form(&mut r, &c, 2, 2);
        let res = magri_residual(&pi, &sigma).unwrap();
        ensure(
            res.iter().all(|(_, v)| v.is_zero()),
            format!("pair {k} leaves a residual"),
        )?;
    }
    Ok("concomitant identity holds exactly on 10 random pairs on R3".into())
}

fn criterion_4() -> Verdict {
    let mut r = rng(SEED + 4);
    let instances: Vec<Gcps> = corpus()
        .into_iter()
        .filter(|i| i.integrable)
        .take(6)
        .map(|i| i.g)
        .collect();
    for (k, g) in instances.iter().enumerate() {
        let c = g.chart();
        let b1 = random_form(&mut r, c, 1, 2).d();
        let b2 = random_form(&mut r, c, 1, 2).d();
        let step = gauge_transform(&gauge_transform(g, &b1).unwrap(), &b2).unwrap();
        ensure(
            step == gauge_transform(g, &b1.add(&b2)).unwrap(),
            format!("instance {k}: gauges do not compose"),
        )?;
        let once = gauge_transform(g, &b1).unwrap();
        ensure(
            once.pi() == g.pi(),
            format!("instance {k}: bivector changed"),
        )?;
        let conj = gauge_endo(&b1.neg())
            .compose(&g.to_big_endo())
            .compose(&gauge_endo(&b1));
        ensure(
            Gcps::from_big_endo(&conj).unwrap() == once,
            format!("instance {k}: block formula differs"),
        )?;
    }
    Ok(format!(
        "composition, bivector invariance and conjugation hold on {} instances",
        instances.len()
    ))
}

fn criterion_5() -> Verdict {
    let (c2, c4) = (r2(), r4());
    let dxdy = KForm::basis(&c2, &[0, 1]);
    let w4 = std_w4(&c4);
    let diag = |a: i64, b: i64| {
        let mut m = Matrix::zeros(4, 4);
        for (i, v) in [a, a, b, b].into_iter().enumerate() {
            m[(i, i)] = int(v);
        }
        OneOneTensor::new(&c4, m)
    };
    let pairs = [
        (dxdy.clone(), OneOneTensor::zero(&c2)),
        (dxdy.clone(), OneOneTensor::identity(&c2)),
        (dxdy, OneOneTensor::scalar(&c2, c2.x(0))),
        (w4.clone(), OneOneTensor::zero(&c4)),
        (w4.clone(), OneOneTensor::identity(&c4)),
        (w4, diag(2, 3)),
    ];
    let eps = [Epsilon::Complex, Epsilon::Paracomplex, Epsilon::Subtangent];
    for (k, (w, a)) in pairs.into_iter().enumerate() {
        let h = HitchinPair::new(w, a).unwrap();
        let g = hitchin_to_gcps(&h, eps[k % 3]).unwrap();
        ensure(
            gcps_to_hitchin(&g).unwrap() == h,
            format!("pair {k} does not round trip"),
        )?;
    }
    Ok("6 pairs round trip exactly, including the two symplectic plane pairs".into())
}

fn criterion_6() -> Verdict {
    let (c2, c4) = (r2(), r4());
    let pairs = [
        (
            KForm::basis(&c2, &[0, 1]),
            KVector::basis(&c2, &[0, 1]).scale(&c2.x(0)),
        ),
        (std_w4(&c4), std_pi4(&c4).scale(&int(2))),
        (std_w4(&c4), KVector::basis(&c4, &[0, 2])),
    ];
    for (k, (w, big_w)) in pairs.iter().enumerate() {
        let pts = sample_points(SEED + k as u64, w.chart().dim(), 3);
        let rep = phi_w_eigencheck(w, big_w, &pts).unwrap();
        ensure(
            rep.passed() && rep.points_checked == 3,
            format!("pair {k}: {:?}", rep.failure),
        )?;
    }
    Ok(
        "eigenbundle graphs match at 3 points for 3 compatible pairs over the Gaussian rationals"
            .into(),
    )
}

fn criterion_7() -> Verdict {
    let c = r4();
    let n = SubmanifoldSpec::new(&c, &["p2"]).unwrap().with_seed(SEED);
    let f = FoliationSpec::new(&n, &["q2"]).unwrap();
    let e = ControlBundle::new(&n, vec![VectorField::coordinate(&c, 2)]).unwrap();
    let w2 = KForm::basis(f.quotient_chart(), &[0, 1]);
    let gold = sympl(&w2, Epsilon::Complex, SymplecticVariant::First);
    let g = sympl(&std_w4(&c), Epsilon::Complex, SymplecticVariant::First);
    let routes = [
        ("control bundle", gcps_reduce(&g, &e, &f).map(|r| r.reduced)),
        (
            "enlarged image",
            reduce_via_enlarged(&g, &n, &f).map(|r| r.reduced),
        ),
        (
            "pseudo-normal",
            reduce_via_pseudonormal(&g, &n, &f).map(|r| r.reduced),
        ),
        (
            "hitchin",
            hitchin_reduce(
                &HitchinPair::new(std_w4(&c), OneOneTensor::zero(&c)).unwrap(),
                &n,
                &f,
            )
            .map(|h| hitchin_to_gcps(&h, Epsilon::Complex).unwrap()),
        ),
    ];
    for (name, r) in routes {
        let r = r.map_err(|e| format!("{name}: {e}"))?;
        ensure(
            r == gold,
            format!("{name} route differs from the gold structure"),
        )?;
    }
    let mut lam = vec![Rf::zero(); 4];
    lam[0] = int(1);
    let x = controlled_extension(&e, &lam, Extension::Coordinate).map_err(|e| e.to_string())?;
    let y = controlled_extension(&e, &lam, Extension::Sheared).map_err(|e| e.to_string())?;
    ensure(x != y, "the two controlled extensions coincide")?;
    let reduced_pi = poisson_reduce(g.pi(), &e, &f).map_err(|e| e.to_string())?;
    ensure(reduced_pi == *gold.pi(), "reduced bivector differs")?;
    let m = translation_momentum_reduction(&g, "p2", "q2").map_err(|e| e.to_string())?;
    ensure(m.result.reduced == gold, "momentum packaging differs")?;
    let g2 = sympl(&std_w4(&c), Epsilon::Complex, SymplecticVariant::Second);
    let m2 = translation_momentum_reduction(&g2, "p2", "q2").map_err(|e| e.to_string())?;
    ensure(
        m2.momentum_condition
            && m2.result.reduced == sympl(&w2, Epsilon::Complex, SymplecticVariant::Second),
        "momentum example with A = Id",
    )?;
    Ok(format!(
        "four routes give the gold structure; distinct controlled extensions reduce alike; momentum packaging reproduces it (intertwining condition {} for A = 0, {} for A = Id)",
        m.momentum_condition, m2.momentum_condition
    ))
}

fn plane(c: &Chart) -> SubmanifoldSpec {
    let names: Vec<&str> = c.coords()[c.dim() - 2..]
        .iter()
        .map(String::as_str)
        .collect();
    SubmanifoldSpec::new(c, &names).unwrap().with_seed(SEED)
}

/// Coordinate submanifolds of each corpus chart.
fn candidates(c: &Chart) -> Vec<SubmanifoldSpec> {
    let n = c.dim();
    let mut v = vec![SubmanifoldSpec::new(c, &[c.coord(n - 1)]).unwrap()];
    if n > 2 {
        v.push(plane(c));
        v.push(SubmanifoldSpec::new(c, &[c.coord(0), c.coord(2)]).unwrap());
    }
    v.into_iter().map(|s| s.with_seed(SEED)).collect()
}

fn quasi_invariant_example(c: &Chart) -> Gcps {
    let (z, o, m) = (int(0), int(1), int(-1));
    let a = matrix(
        c,
        &[
            &[z.clone(), z.clone(), z.clone(), m.clone()],
            &[z.clone(), z.clone(), m, z.clone()],
            &[z.clone(), o.clone(), z.clone(), z.clone()],
            &[o, z.clone(), z.clone(), z],
        ],
    );
    Gcps::assemble(Epsilon::Complex, a, std_pi4(c), KForm::zero(c, 2)).unwrap()
}

fn criterion_8() -> Verdict {
    let c = r4();
    let n = plane(&c);
    let g = sympl(&std_w4(&c), Epsilon::Complex, SymplecticVariant::First);
    ensure(
        poisson_dirac_check(g.pi(), &n)
            .map_err(|e| e.to_string())?
            .passed(),
        "not Poisson-Dirac",
    )?;
    let ind = induced_structure(&g, &n).map_err(|e| e.to_string())?;
    let expected = sympl(
        &KForm::basis(n.induced_chart(), &[0, 1]),
        Epsilon::Complex,
        SymplecticVariant::First,
    );
    ensure(
        ind.gcps == expected,
        "induced structure is not the symplectic plane",
    )?;

    let mut compared = 0;
    for inst in corpus() {
        for sub in candidates(inst.g.chart()) {
            let rep = poisson_dirac_check(inst.g.pi(), &sub).map_err(|e| e.to_string())?;
            ensure(
                rep.consistent(),
                format!("{}: the two characterizations disagree", inst.name),
            )?;
            compared += 1;
        }
    }

    let q = quasi_invariant_example(&c);
    let ind = induced_structure(&q, &n).map_err(|e| e.to_string())?;
    let nc = n.induced_chart();
    ensure(
        ind.gcps
            .a()
            .apply(&VectorField::coordinate(nc, 0))
            .is_zero(),
        "A' does not kill the first tangent",
    )?;
    let alpha = &ind.alpha_table[0];
    ensure(
        alpha
            .iter()
            .enumerate()
            .all(|(i, v)| (i == 2) != v.is_zero()),
        "first correction form is not proportional to dq2",
    )?;
    ensure(
        n.pullback(q.sigma()).map_err(|e| e.to_string())?.is_zero(),
        "pulled back form is nonzero",
    )?;
    ensure(
        *ind.gcps.sigma() == KForm::basis(nc, &[0, 1]),
        "correction term missing from the induced form",
    )?;
    ensure(
        ind.representative_independent,
        "representative shift changes the result",
    )?;
    Ok(format!(
        "gold plane induces the symplectic plane; characterizations agree on {compared} pairs; quasi-invariant example carries the bivector correction"
    ))
}

fn criterion_9() -> Verdict {
    let mut checked = 0;
    let mut ambient: Vec<Gcps> = corpus()
        .into_iter()
        .filter(|i| i.integrable)
        .map(|i| i.g)
        .collect();
    ambient.push(quasi_invariant_example(&r4()));
    for g in &ambient {
        ensure(
            integrability_check(g).all_pass(),
            "ambient instance not integrable",
        )?;
        for sub in candidates(g.chart()) {
            if !quasi_invariant_check(g, &sub)
                .map_err(|e| e.to_string())?
                .passed()
            {
                continue;
            }
            let ind = induced_structure(g, &sub).map_err(|e| e.to_string())?;
            ensure(
                ind.integrability.overall == Overall::Integrable,
                format!(
                    "induced structure on {:?} not integrable",
                    sub.induced_chart().coords()
                ),
            )?;
            checked += 1;
        }
    }
    ensure(
        checked >= 3,
        format!("only {checked} quasi-invariant pairs"),
    )?;
    let c = r4();
    let g0 = sympl(&std_w4(&c), Epsilon::Subtangent, SymplecticVariant::First);
    let ind = induced_structure(&g0, &plane(&c)).map_err(|e| e.to_string())?;
    ensure(
        ind.integrability.overall == Overall::NecessaryConditionsOnly,
        "subtangent report not capped",
    )?;
    Ok(format!(
        "{checked} induced structures are integrable; the subtangent case reports necessary conditions only"
    ))
}

fn criterion_10() -> Verdict {
    let c = r3();
    let mut r = rng(SEED + 10);
    for k in 0..10 {
        let w1 = random_form(&mut r, &c, 1, 3);
        let w2 = random_form(&mut r, &c, 2, 2);
        ensure(
            w1.d().d().is_zero() && w2.d().d().is_zero(),
            format!("d² ≠ 0 on instance {k}"),
        )?;

        let x = random_vector_field(&mut r, &c, 2);
        ensure(
            w2.lie(&x) == w2.interior(&x).d().add(&w2.d().interior(&x)),
            format!("Cartan formula fails on instance {k}"),
        )?;

        let y = random_vector_field(&mut r, &c, 2);
        let z = random_vector_field(&mut r, &c, 2);
        let jac = x
            .bracket(&y.bracket(&z))
            .add(&y.bracket(&z.bracket(&x)))
            .add(&z.bracket(&x.bracket(&y)));
        ensure(jac.is_zero(), format!("Jacobi fails on instance {k}"))?;

        let p = random_multivector(&mut r, &c, 2, 2);
        let q = random_multivector(&mut r, &c, 1 + k % 2, 2);
        let (dp, dq) = (2i64, (1 + k % 2) as i64);
        let sign = if ((dp - 1) * (dq - 1)) % 2 == 0 {
            -1
        } else {
            1
        };
        ensure(
            p.schouten(&q) == q.schouten(&p).scale(&int(sign)),
            format!("Schouten symmetry fails on instance {k}"),
        )?;

        let f = random_polynomial(&mut r, &c, 2, 3);
        let g = random_polynomial(&mut r, &c, 2, 3);
        let lhs = one_form_bracket(
            &p,
            &KForm::differential(&c, &f),
            &KForm::differential(&c, &g),
        );
        ensure(
            lhs == KForm::differential(&c, &poisson_bracket(&p, &f, &g)),
            format!("bracket of differentials fails on instance {k}"),
        )?;
    }
    Ok("d² = 0, Cartan, Jacobi, Schouten symmetry and the differential bracket hold on 10 instances each".into())
}

fn criterion_11() -> Verdict {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let mut docs: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "gcps"))
        .collect();
    docs.sort();
    ensure(
        docs.len() == 6,
        format!("expected 6 example documents, found {}", docs.len()),
    )?;
    for doc in &docs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_gencps"))
                .args([
                    "check",
                    doc.to_str().unwrap(),
                    "--format",
                    "json",
                    "--seed",
                    "24301",
                ])
                .env_remove("GENCPS_MAX_DEGREE")
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        let name = doc.file_name().unwrap().to_string_lossy().to_string();
        ensure(
            a.status.success(),
            format!("{name}: exit {:?}", a.status.code()),
        )?;
        ensure(a.stdout == b.stdout, format!("{name}: runs differ"))?;
        let golden =
            std::fs::read(doc.with_extension("json")).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            golden == a.stdout,
            format!("{name}: differs from its golden report"),
        )?;
    }
    Ok(format!(
        "{} example reports are byte-identical across runs and match the golden files",
        docs.len()
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Verdict); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, f) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(msg) => println!("criterion {k:>2}: pass: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k:>2}: FAIL: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
