//! Resolution of a parsed document into core objects and task specifications.

use std::collections::HashMap;

use gencps::calculus::{KForm, KVector};
use gencps::courant::{BigSection, SectionSpan};
use gencps::gcps::{
    classical_structure, direct_sum, gauge_transform, hitchin_to_gcps, opposite,
    phi_from_compatible_pair, symplectic_structure, Epsilon, Gcps, HitchinPair, PolyMap,
    SymplecticVariant,
};
use gencps::reduction::{ControlBundle, FoliationSpec, SubmanifoldSpec};
use gencps::{Chart, Matrix, OneOneTensor, Rational, Rf, VectorField};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::syntax::{Arg, Document, Expr, Pos, Statement};

/// Validation failure at a source position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ModelError {
    pub pos: Pos,
    pub message: String,
}

type Res<T> = Result<T, ModelError>;

fn fail<T>(pos: Pos, message: impl Into<String>) -> Res<T> {
    Err(ModelError {
        pos,
        message: message.into(),
    })
}

fn at<T, E: std::fmt::Display>(pos: Pos, r: Result<T, E>) -> Res<T> {
    r.map_err(|e| ModelError {
        pos,
        message: e.to_string(),
    })
}

/// A tensor field declared on a chart.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Rf),
    Form(KForm),
    Multi(KVector),
}

impl Value {
    fn kind(&self) -> String {
        match self {
            Value::Scalar(_) => "a function".into(),
            Value::Form(f) => format!("a {}-form", f.degree()),
            Value::Multi(m) => format!("a {}-vector", m.degree()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Item {
    Chart(Chart),
    Value(Chart, Value),
    Tensor(OneOneTensor),
    Structure(Gcps),
    Hitchin(HitchinPair),
    Submanifold(SubmanifoldSpec),
    Foliation(FoliationSpec),
    Bundle(ControlBundle),
    Span(SectionSpan),
    Map(PolyMap),
}

impl Item {
    fn kind(&self) -> &'static str {
        match self {
            Item::Chart(_) => "chart",
            Item::Value(..) => "tensor field",
            Item::Tensor(_) => "tensor",
            Item::Structure(_) => "structure",
            Item::Hitchin(_) => "hitchin pair",
            Item::Submanifold(_) => "submanifold",
            Item::Foliation(_) => "foliation",
            Item::Bundle(_) => "bundle",
            Item::Span(_) => "span",
            Item::Map(_) => "map",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Debug)]
pub enum Route {
    Bundle(ControlBundle),
    Enlarged,
    PseudoNormal,
}

#[derive(Clone, Debug)]
pub enum TaskKind {
    Check(Gcps),
    TwistedCheck(Gcps, KForm),
    Gauge(Gcps, KForm),
    Beta(Gcps, KVector),
    Hitchin(HitchinPair, Epsilon),
    Hierarchy(Gcps, usize),
    Reduce(Gcps, FoliationSpec, Route),
    HitchinReduce(HitchinPair, FoliationSpec),
    Momentum(Gcps, String, String),
    Induce(Gcps, SubmanifoldSpec),
    Classify(Gcps, SubmanifoldSpec, Option<Vec<String>>),
    MapCheck(PolyMap, Gcps, Gcps),
    NormalForm {
        g: Gcps,
        point: Vec<Rational>,
        leaf: Vec<Vec<Rational>>,
        normal: Vec<Vec<Rational>>,
    },
    Dirac(SectionSpan, Option<KForm>),
}

#[derive(Clone, Debug)]
pub struct Task {
    pub name: String,
    /// Canonical text of the task call.
    pub call: String,
    pub expect: Expect,
    pub kind: TaskKind,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub items: HashMap<String, Item>,
    pub tasks: Vec<Task>,
}

pub const DEFAULT_MAX_DEGREE: u32 = 12;

struct Builder {
    items: HashMap<String, Item>,
    current: Option<Chart>,
    seed: u64,
    max_degree: u32,
}

/// Resolves declarations in order; each name may be declared once.
pub fn build(doc: &Document, seed: u64, max_degree: u32) -> Res<Model> {
    let mut b = Builder {
        items: HashMap::new(),
        current: None,
        seed,
        max_degree,
    };
    let mut tasks = Vec::new();
    for st in &doc.statements {
        match st {
            Statement::Chart { name, coords, pos } => b.chart(name, coords, *pos)?,
            Statement::Decl {
                kind,
                name,
                chart,
                value,
                pos,
            } => {
                b.fresh(name, *pos)?;
                let c = b.chart_for(chart.as_deref(), *pos)?;
                let item = b.decl(kind, &c, value, *pos)?;
                b.items.insert(name.clone(), item);
            }
            Statement::Task { name, args, pos } => {
                let (expect, args) = split_expect(args, *pos)?;
                let call = st.to_string();
                let call = call
                    .trim_start_matches("task ")
                    .trim_end_matches(';')
                    .to_string();
                let kind = b.task(name, &args, *pos)?;
                tasks.push(Task {
                    name: name.clone(),
                    call,
                    expect,
                    kind,
                });
            }
        }
    }
    Ok(Model {
        items: b.items,
        tasks,
    })
}

fn split_expect(args: &[Arg], pos: Pos) -> Res<(Expect, Vec<Arg>)> {
    let mut expect = Expect::Pass;
    let mut rest = Vec::new();
    for a in args {
        if a.key.as_deref() == Some("expect") {
            expect = match &a.value {
                Expr::Ident(s, _) if s == "pass" => Expect::Pass,
                Expr::Ident(s, _) if s == "fail" => Expect::Fail,
                e => return fail(e.pos().unwrap_or(pos), "expect must be 'pass' or 'fail'"),
            };
        } else {
            rest.push(a.clone());
        }
    }
    Ok((expect, rest))
}

/// Positional and keyword arguments of one call.
struct Args<'a> {
    pos: Pos,
    what: &'a str,
    positional: Vec<&'a Expr>,
    named: Vec<(&'a str, &'a Expr)>,
}

impl<'a> Args<'a> {
    fn new(what: &'a str, args: &'a [Arg], pos: Pos) -> Self {
        let mut positional = Vec::new();
        let mut named = Vec::new();
        for a in args {
            match &a.key {
                Some(k) => named.push((k.as_str(), &a.value)),
                None => positional.push(&a.value),
            }
        }
        Args {
            pos,
            what,
            positional,
            named,
        }
    }

    fn arity(&self, min: usize, max: usize, keys: &[&str]) -> Res<()> {
        let n = self.positional.len();
        if n < min || n > max {
            let want = if min == max {
                format!("{min}")
            } else {
                format!("{min} to {max}")
            };
            return fail(
                self.pos,
                format!("{} takes {want} positional arguments, found {n}", self.what),
            );
        }
        for (k, e) in &self.named {
            if !keys.contains(k) {
                return fail(
                    e.pos().unwrap_or(self.pos),
                    format!("{} has no argument '{k}'", self.what),
                );
            }
        }
        Ok(())
    }

    fn get(&self, i: usize) -> &'a Expr {
        self.positional[i]
    }

    fn named(&self, key: &str) -> Option<&'a Expr> {
        self.named.iter().find(|(k, _)| *k == key).map(|(_, e)| *e)
    }
}

fn items(e: &Expr) -> Vec<&Expr> {
    match e {
        Expr::Tuple(xs, _) | Expr::List(xs, _) => xs.iter().collect(),
        e => vec![e],
    }
}

fn ident(e: &Expr, pos: Pos) -> Res<(&str, Pos)> {
    match e {
        Expr::Ident(s, p) => Ok((s, *p)),
        e => fail(
            e.pos().unwrap_or(pos),
            format!("expected a name, found '{e}'"),
        ),
    }
}

fn epsilon(e: Option<&Expr>, pos: Pos) -> Res<Epsilon> {
    let v = match e {
        None => return fail(pos, "missing argument eps"),
        Some(Expr::Int(s)) => s.parse::<i64>().ok(),
        Some(Expr::Neg(b)) => match &**b {
            Expr::Int(s) => s.parse::<i64>().ok().map(|v| -v),
            _ => None,
        },
        Some(_) => None,
    };
    match v.and_then(Epsilon::from_i64) {
        Some(e) => Ok(e),
        None => fail(
            e.and_then(Expr::pos).unwrap_or(pos),
            "eps must be -1, 0 or 1",
        ),
    }
}

fn small_int(e: &Expr, pos: Pos) -> Res<usize> {
    match e {
        Expr::Int(s) => s
            .parse()
            .or_else(|_| fail(pos, format!("{s} is too large"))),
        e => fail(
            e.pos().unwrap_or(pos),
            format!("expected a non-negative integer, found '{e}'"),
        ),
    }
}

impl Builder {
    fn fresh(&self, name: &str, pos: Pos) -> Res<()> {
        if self.items.contains_key(name) {
            return fail(pos, format!("'{name}' is already declared"));
        }
        for item in self.items.values() {
            if let Item::Chart(c) = item {
                if c.index_of(name).is_some() || frame_token(c, name).is_some() {
                    return fail(
                        pos,
                        format!("'{name}' clashes with a coordinate of chart {}", c.name()),
                    );
                }
            }
        }
        Ok(())
    }

    fn chart(&mut self, name: &str, coords: &[String], pos: Pos) -> Res<()> {
        self.fresh(name, pos)?;
        if coords.is_empty() {
            return fail(pos, "a chart needs at least one coordinate");
        }
        let c = at(pos, Chart::new(name, coords))?;
        for x in coords {
            if frame_token(&c, x).is_some() {
                return fail(
                    pos,
                    format!("coordinate '{x}' reads as a frame element of the chart"),
                );
            }
            if self.items.contains_key(x) {
                return fail(
                    pos,
                    format!("coordinate '{x}' clashes with a declared name"),
                );
            }
        }
        self.items.insert(name.to_string(), Item::Chart(c.clone()));
        self.current = Some(c);
        Ok(())
    }

    fn chart_for(&self, name: Option<&str>, pos: Pos) -> Res<Chart> {
        match name {
            None => self.current.clone().ok_or_else(|| ModelError {
                pos,
                message: "no chart declared".into(),
            }),
            Some(n) => match self.items.get(n) {
                Some(Item::Chart(c)) => Ok(c.clone()),
                Some(i) => fail(pos, format!("'{n}' is a {}, not a chart", i.kind())),
                None => fail(pos, format!("unknown chart '{n}'")),
            },
        }
    }

    fn lookup(&self, name: &str, pos: Pos) -> Res<&Item> {
        self.items.get(name).ok_or_else(|| ModelError {
            pos,
            message: format!("unknown name '{name}'"),
        })
    }

    fn guard(&self, f: &Rf, pos: Pos) -> Res<()> {
        let d = f.total_degree();
        if d > self.max_degree {
            return fail(
                pos,
                format!("degree {d} exceeds the limit {}", self.max_degree),
            );
        }
        Ok(())
    }

    fn eval(&self, c: &Chart, e: &Expr) -> Res<Value> {
        let pos = e.pos().unwrap_or_default();
        let v = match e {
            Expr::Int(s) => {
                let n: BigInt = s.parse().expect("lexer yields digits");
                Value::Scalar(Rf::constant(Rational::from_integer(n)))
            }
            Expr::Ident(s, p) => self.ident_value(c, s, *p)?,
            Expr::Neg(x) => match self.eval(c, x)? {
                Value::Scalar(f) => Value::Scalar(-f),
                Value::Form(f) => Value::Form(f.neg()),
                Value::Multi(m) => Value::Multi(m.neg()),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sub = matches!(e, Expr::Sub(..));
                match (self.eval(c, a)?, self.eval(c, b)?) {
                    (Value::Scalar(x), Value::Scalar(y)) => {
                        Value::Scalar(if sub { &x - &y } else { &x + &y })
                    }
                    (Value::Form(x), Value::Form(y)) if x.degree() == y.degree() => {
                        Value::Form(if sub { x.sub(&y) } else { x.add(&y) })
                    }
                    (Value::Multi(x), Value::Multi(y)) if x.degree() == y.degree() => {
                        Value::Multi(if sub { x.sub(&y) } else { x.add(&y) })
                    }
                    (x, y) => {
                        return fail(pos, format!("cannot add {} and {}", x.kind(), y.kind()))
                    }
                }
            }
            Expr::Mul(a, b) => match (self.eval(c, a)?, self.eval(c, b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
                (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => {
                    Value::Form(f.scale(&x))
                }
                (Value::Scalar(x), Value::Multi(m)) | (Value::Multi(m), Value::Scalar(x)) => {
                    Value::Multi(m.scale(&x))
                }
                (x, y) => {
                    return fail(
                        pos,
                        format!(
                            "cannot multiply {} by {}; use ^ for the wedge product",
                            x.kind(),
                            y.kind()
                        ),
                    )
                }
            },
            Expr::Div(a, b) => {
                let Value::Scalar(d) = self.eval(c, b)? else {
                    return fail(pos, "the divisor must be a function");
                };
                if d.is_zero() {
                    return fail(pos, "division by zero");
                }
                let inv = &Rf::one() / &d;
                match self.eval(c, a)? {
                    Value::Scalar(x) => Value::Scalar(&x * &inv),
                    Value::Form(f) => Value::Form(f.scale(&inv)),
                    Value::Multi(m) => Value::Multi(m.scale(&inv)),
                }
            }
            Expr::Wedge(a, b) => match (self.eval(c, a)?, self.eval(c, b)?) {
                (Value::Form(x), Value::Form(y)) => Value::Form(x.wedge(&y)),
                (Value::Multi(x), Value::Multi(y)) => Value::Multi(x.wedge(&y)),
                (x, y) => {
                    return fail(
                        pos,
                        format!(
                            "cannot wedge {} with {}; use ** for powers",
                            x.kind(),
                            y.kind()
                        ),
                    )
                }
            },
            Expr::Pow(a, k) => match self.eval(c, a)? {
                Value::Scalar(x) => {
                    if u64::from(x.total_degree()) * u64::from(*k) > u64::from(self.max_degree) {
                        return fail(
                            pos,
                            format!("degree of power exceeds the limit {}", self.max_degree),
                        );
                    }
                    Value::Scalar(x.pow(*k))
                }
                x => return fail(pos, format!("cannot raise {} to a power", x.kind())),
            },
            Expr::Call(name, _, p) => {
                return fail(*p, format!("'{name}(...)' is not a tensor expression"))
            }
            Expr::List(_, p) | Expr::Tuple(_, p) => {
                return fail(*p, "a list is not a tensor expression")
            }
        };
        match &v {
            Value::Scalar(f) => self.guard(f, pos)?,
            Value::Form(m) => m.comps().values().try_for_each(|f| self.guard(f, pos))?,
            Value::Multi(m) => m.comps().values().try_for_each(|f| self.guard(f, pos))?,
        }
        Ok(v)
    }

    fn ident_value(&self, c: &Chart, s: &str, p: Pos) -> Res<Value> {
        if let Some(i) = c.index_of(s) {
            return Ok(Value::Scalar(c.x(i)));
        }
        if let Some(item) = self.items.get(s) {
            return match item {
                Item::Value(vc, v) if vc.same(c) => Ok(v.clone()),
                Item::Value(vc, _) => fail(
                    p,
                    format!("'{s}' lives on chart {}, not {}", vc.name(), c.name()),
                ),
                i => fail(p, format!("'{s}' is a {}, not a tensor field", i.kind())),
            };
        }
        match frame_token(c, s) {
            Some(Frame::Form(i)) => Ok(Value::Form(KForm::basis(c, &[i]))),
            Some(Frame::Vector(i)) => Ok(Value::Multi(KVector::basis(c, &[i]))),
            None => fail(p, format!("unknown name '{s}' on chart {}", c.name())),
        }
    }

    fn scalar(&self, c: &Chart, e: &Expr) -> Res<Rf> {
        match self.eval(c, e)? {
            Value::Scalar(f) => Ok(f),
            v => fail(
                e.pos().unwrap_or_default(),
                format!("expected a function, found {}", v.kind()),
            ),
        }
    }

    fn form(&self, c: &Chart, e: &Expr, degree: Option<usize>) -> Res<KForm> {
        let pos = e.pos().unwrap_or_default();
        let f = match self.eval(c, e)? {
            Value::Form(f) => f,
            Value::Scalar(f) if f.is_zero() && degree.is_some() => {
                KForm::zero(c, degree.unwrap_or(0))
            }
            Value::Scalar(f) if degree.unwrap_or(0) == 0 => KForm::function(c, f),
            v => return fail(pos, format!("expected a form, found {}", v.kind())),
        };
        match degree {
            Some(d) if d != f.degree() => fail(
                pos,
                format!("expected a {d}-form, found a {}-form", f.degree()),
            ),
            _ => Ok(f),
        }
    }

    fn multi(&self, c: &Chart, e: &Expr, degree: Option<usize>) -> Res<KVector> {
        let pos = e.pos().unwrap_or_default();
        let m = match self.eval(c, e)? {
            Value::Multi(m) => m,
            Value::Scalar(f) if f.is_zero() && degree.is_some() => {
                KVector::zero(c, degree.unwrap_or(0))
            }
            Value::Scalar(f) if degree.unwrap_or(0) == 0 => KVector::function(c, f),
            v => return fail(pos, format!("expected a multivector, found {}", v.kind())),
        };
        match degree {
            Some(d) if d != m.degree() => fail(
                pos,
                format!("expected a {d}-vector, found a {}-vector", m.degree()),
            ),
            _ => Ok(m),
        }
    }

    fn vector(&self, c: &Chart, e: &Expr) -> Res<VectorField> {
        Ok(self.multi(c, e, Some(1))?.to_vector())
    }

    fn tensor(&self, c: &Chart, e: &Expr) -> Res<OneOneTensor> {
        let pos = e.pos().unwrap_or_default();
        match e {
            Expr::Ident(s, p) if !c.index_of(s).is_some() => match self.lookup(s, *p)? {
                Item::Tensor(t) if t.chart().same(c) => Ok(t.clone()),
                Item::Tensor(t) => fail(*p, format!("'{s}' lives on chart {}", t.chart().name())),
                i => fail(*p, format!("'{s}' is a {}, not a tensor", i.kind())),
            },
            Expr::Call(name, args, p) => match (name.as_str(), args.as_slice()) {
                ("identity", []) => Ok(OneOneTensor::identity(c)),
                ("zero", []) => Ok(OneOneTensor::zero(c)),
                ("scalar", [a]) if a.key.is_none() => {
                    Ok(OneOneTensor::scalar(c, self.scalar(c, &a.value)?))
                }
                _ => fail(*p, format!("unknown tensor constructor '{name}'")),
            },
            Expr::List(rows, p) => {
                let n = c.dim();
                if rows.len() != n {
                    return fail(*p, format!("expected {n} rows, found {}", rows.len()));
                }
                let mut m = Vec::with_capacity(n);
                for r in rows {
                    let Expr::List(entries, rp) = r else {
                        return fail(r.pos().unwrap_or(*p), "each row must be a list");
                    };
                    if entries.len() != n {
                        return fail(
                            *rp,
                            format!("expected {n} entries, found {}", entries.len()),
                        );
                    }
                    m.push(
                        entries
                            .iter()
                            .map(|x| self.scalar(c, x))
                            .collect::<Res<Vec<_>>>()?,
                    );
                }
                Ok(OneOneTensor::new(c, Matrix::from_rows(m)))
            }
            _ => fail(pos, format!("expected a tensor, found '{e}'")),
        }
    }

    fn named<T>(
        &self,
        e: &Expr,
        pos: Pos,
        pick: impl Fn(&Item) -> Option<T>,
        what: &str,
    ) -> Res<T> {
        let (s, p) = ident(e, pos)?;
        let item = self.lookup(s, p)?;
        pick(item).ok_or_else(|| ModelError {
            pos: p,
            message: format!("'{s}' is a {}, not a {what}", item.kind()),
        })
    }

    fn structure(&self, e: &Expr, pos: Pos) -> Res<Gcps> {
        self.named(
            e,
            pos,
            |i| match i {
                Item::Structure(g) => Some(g.clone()),
                _ => None,
            },
            "structure",
        )
    }

    fn hitchin(&self, e: &Expr, pos: Pos) -> Res<HitchinPair> {
        self.named(
            e,
            pos,
            |i| match i {
                Item::Hitchin(h) => Some(h.clone()),
                _ => None,
            },
            "hitchin pair",
        )
    }

    fn submanifold(&self, e: &Expr, pos: Pos) -> Res<SubmanifoldSpec> {
        self.named(
            e,
            pos,
            |i| match i {
                Item::Submanifold(s) => Some(s.clone()),
                _ => None,
            },
            "submanifold",
        )
    }

    fn foliation(&self, e: &Expr, pos: Pos) -> Res<FoliationSpec> {
        self.named(
            e,
            pos,
            |i| match i {
                Item::Foliation(f) => Some(f.clone()),
                _ => None,
            },
            "foliation",
        )
    }

    fn chart_arg(&self, e: &Expr, pos: Pos) -> Res<Chart> {
        self.named(
            e,
            pos,
            |i| match i {
                Item::Chart(c) => Some(c.clone()),
                _ => None,
            },
            "chart",
        )
    }

    fn coordinate_names(&self, c: &Chart, es: &[&Expr], pos: Pos) -> Res<Vec<String>> {
        es.iter()
            .map(|e| {
                let (s, p) = ident(e, pos)?;
                match c.index_of(s) {
                    Some(_) => Ok(s.to_string()),
                    None => fail(
                        p,
                        format!("'{s}' is not a coordinate of chart {}", c.name()),
                    ),
                }
            })
            .collect()
    }

    fn decl(&self, kind: &str, c: &Chart, value: &Expr, pos: Pos) -> Res<Item> {
        let v = |x: Value| Ok(Item::Value(c.clone(), x));
        match kind {
            "function" => v(Value::Scalar(self.scalar(c, value)?)),
            "form" => v(Value::Form(self.form(c, value, None)?)),
            "vector" => v(Value::Multi(self.multi(c, value, Some(1))?)),
            "bivector" => v(Value::Multi(self.multi(c, value, Some(2))?)),
            "multivector" => v(Value::Multi(self.multi(c, value, None)?)),
            "tensor" => Ok(Item::Tensor(self.tensor(c, value)?)),
            _ => {
                let Expr::Call(f, args, p) = value else {
                    return fail(
                        value.pos().unwrap_or(pos),
                        format!("a {kind} is declared by a constructor call"),
                    );
                };
                self.construct(kind, c, f, args, *p)
            }
        }
    }

    fn construct(&self, kind: &str, c: &Chart, f: &str, args: &[Arg], pos: Pos) -> Res<Item> {
        let a = Args::new(f, args, pos);
        match (kind, f) {
            ("structure", "gcps") => {
                a.arity(3, 3, &["eps"])?;
                let eps = epsilon(a.named("eps"), pos)?;
                let t = self.tensor(c, a.get(0))?;
                let pi = self.multi(c, a.get(1), Some(2))?;
                let sigma = self.form(c, a.get(2), Some(2))?;
                Ok(Item::Structure(at(pos, Gcps::assemble(eps, t, pi, sigma))?))
            }
            ("structure", "classical") => {
                a.arity(1, 1, &["eps"])?;
                let eps = epsilon(a.named("eps"), pos)?;
                Ok(Item::Structure(at(
                    pos,
                    classical_structure(&self.tensor(c, a.get(0))?, eps),
                )?))
            }
            ("structure", "symplectic") => {
                a.arity(1, 1, &["eps", "variant"])?;
                let eps = epsilon(a.named("eps"), pos)?;
                let variant = match a.named("variant") {
                    None => SymplecticVariant::First,
                    Some(Expr::Ident(s, _)) if s == "first" => SymplecticVariant::First,
                    Some(Expr::Ident(s, _)) if s == "second" => SymplecticVariant::Second,
                    Some(e) => {
                        return fail(
                            e.pos().unwrap_or(pos),
                            "variant must be 'first' or 'second'",
                        )
                    }
                };
                let w = self.form(c, a.get(0), Some(2))?;
                Ok(Item::Structure(at(
                    pos,
                    symplectic_structure(&w, eps, variant),
                )?))
            }
            ("structure", "compatible") => {
                a.arity(2, 2, &["eps"])?;
                let eps = epsilon(a.named("eps"), pos)?;
                let w = self.form(c, a.get(0), Some(2))?;
                let big_w = self.multi(c, a.get(1), Some(2))?;
                Ok(Item::Structure(at(
                    pos,
                    phi_from_compatible_pair(&w, &big_w, eps),
                )?))
            }
            ("structure", "from_hitchin") => {
                a.arity(1, 1, &["eps"])?;
                let eps = epsilon(a.named("eps"), pos)?;
                Ok(Item::Structure(at(
                    pos,
                    hitchin_to_gcps(&self.hitchin(a.get(0), pos)?, eps),
                )?))
            }
            ("structure", "sum") => {
                a.arity(2, 2, &[])?;
                let g1 = self.structure(a.get(0), pos)?;
                let g2 = self.structure(a.get(1), pos)?;
                Ok(Item::Structure(at(pos, direct_sum(&g1, &g2))?))
            }
            ("structure", "opposite") => {
                a.arity(1, 1, &[])?;
                Ok(Item::Structure(opposite(&self.structure(a.get(0), pos)?)))
            }
            ("structure", "gauge") => {
                a.arity(2, 2, &[])?;
                let g = self.structure(a.get(0), pos)?;
                let b = self.form(g.chart(), a.get(1), Some(2))?;
                Ok(Item::Structure(at(pos, gauge_transform(&g, &b))?))
            }
            ("hitchin", "pair") => {
                a.arity(2, 2, &[])?;
                let w = self.form(c, a.get(0), Some(2))?;
                let t = self.tensor(c, a.get(1))?;
                Ok(Item::Hitchin(at(pos, HitchinPair::new(w, t))?))
            }
            ("submanifold", "zeros") => {
                a.arity(0, usize::MAX, &[])?;
                let names = self.coordinate_names(c, &a.positional, pos)?;
                let sub = at(pos, SubmanifoldSpec::new(c, &names))?;
                Ok(Item::Submanifold(sub.with_seed(self.seed)))
            }
            ("foliation", "fibers") => {
                a.arity(1, usize::MAX, &[])?;
                let sub = self.submanifold(a.get(0), pos)?;
                let names = self.coordinate_names(sub.chart(), &a.positional[1..], pos)?;
                Ok(Item::Foliation(at(pos, FoliationSpec::new(&sub, &names))?))
            }
            ("bundle", "along") => {
                a.arity(1, usize::MAX, &[])?;
                let sub = self.submanifold(a.get(0), pos)?;
                let gens = a.positional[1..]
                    .iter()
                    .map(|e| self.vector(sub.chart(), e))
                    .collect::<Res<Vec<_>>>()?;
                Ok(Item::Bundle(at(pos, ControlBundle::new(&sub, gens))?))
            }
            ("span", "sections") => {
                a.arity(1, usize::MAX, &["rank"])?;
                let mut gens = Vec::new();
                for e in &a.positional {
                    let parts = items(e);
                    let ep = e.pos().unwrap_or(pos);
                    if parts.len() != 2 || !matches!(e, Expr::Tuple(..)) {
                        return fail(ep, "a section is a pair (vector, 1-form)");
                    }
                    let x = self.vector(c, parts[0])?;
                    let alpha = self.form(c, parts[1], Some(1))?;
                    gens.push(BigSection::new(x, alpha));
                }
                let rank = match a.named("rank") {
                    Some(e) => small_int(e, pos)?,
                    None => gens.len(),
                };
                Ok(Item::Span(SectionSpan::new(gens, rank)))
            }
            ("map", "polynomial") => {
                a.arity(3, 3, &[])?;
                let src = self.chart_arg(a.get(0), pos)?;
                let dst = self.chart_arg(a.get(1), pos)?;
                let comps = items(a.get(2))
                    .into_iter()
                    .map(|e| self.scalar(&src, e))
                    .collect::<Res<Vec<_>>>()?;
                Ok(Item::Map(at(pos, PolyMap::new(&src, &dst, &comps))?))
            }
            _ => fail(pos, format!("unknown {kind} constructor '{f}'")),
        }
    }

    fn task(&self, name: &str, args: &[Arg], pos: Pos) -> Res<TaskKind> {
        let a = Args::new(name, args, pos);
        Ok(match name {
            "check" | "integrability" => {
                a.arity(1, 1, &[])?;
                TaskKind::Check(self.structure(a.get(0), pos)?)
            }
            "twisted_check" => {
                a.arity(2, 2, &[])?;
                let g = self.structure(a.get(0), pos)?;
                let l = self.form(g.chart(), a.get(1), Some(3))?;
                TaskKind::TwistedCheck(g, l)
            }
            "gauge" => {
                a.arity(2, 2, &[])?;
                let g = self.structure(a.get(0), pos)?;
                let b = self.form(g.chart(), a.get(1), Some(2))?;
                TaskKind::Gauge(g, b)
            }
            "beta" => {
                a.arity(2, 2, &[])?;
                let g = self.structure(a.get(0), pos)?;
                let b = self.multi(g.chart(), a.get(1), Some(2))?;
                TaskKind::Beta(g, b)
            }
            "hitchin" => {
                a.arity(1, 1, &["eps"])?;
                TaskKind::Hitchin(self.hitchin(a.get(0), pos)?, epsilon(a.named("eps"), pos)?)
            }
            "hierarchy" => {
                a.arity(1, 1, &["k"])?;
                let k = match a.named("k") {
                    Some(e) => small_int(e, pos)?,
                    None => 3,
                };
                TaskKind::Hierarchy(self.structure(a.get(0), pos)?, k)
            }
            "reduce" => {
                a.arity(2, 2, &["bundle", "route"])?;
                let fol = self.foliation(a.get(1), pos)?;
                if let Ok(h) = self.hitchin(a.get(0), pos) {
                    if !a.named.is_empty() {
                        return fail(pos, "a hitchin pair reduces along its foliation only");
                    }
                    return Ok(TaskKind::HitchinReduce(h, fol));
                }
                let g = self.structure(a.get(0), pos)?;
                let route = match (a.named("bundle"), a.named("route")) {
                    (Some(e), None) => Route::Bundle(self.named(
                        e,
                        pos,
                        |i| match i {
                            Item::Bundle(b) => Some(b.clone()),
                            _ => None,
                        },
                        "bundle",
                    )?),
                    (None, Some(Expr::Ident(s, _))) if s == "enlarged" => Route::Enlarged,
                    (None, Some(Expr::Ident(s, _))) if s == "pseudonormal" => Route::PseudoNormal,
                    _ => return fail(pos, "reduce needs bundle=E or route=enlarged|pseudonormal"),
                };
                TaskKind::Reduce(g, fol, route)
            }
            "momentum" => {
                a.arity(3, 3, &[])?;
                let g = self.structure(a.get(0), pos)?;
                let names = self.coordinate_names(g.chart(), &a.positional[1..], pos)?;
                TaskKind::Momentum(g, names[0].clone(), names[1].clone())
            }
            "induce" => {
                a.arity(2, 2, &[])?;
                TaskKind::Induce(
                    self.structure(a.get(0), pos)?,
                    self.submanifold(a.get(1), pos)?,
                )
            }
            "classify" => {
                a.arity(2, 2, &["normal"])?;
                let g = self.structure(a.get(0), pos)?;
                let sub = self.submanifold(a.get(1), pos)?;
                let normal = match a.named("normal") {
                    Some(e) => Some(self.coordinate_names(g.chart(), &items(e), pos)?),
                    None => None,
                };
                TaskKind::Classify(g, sub, normal)
            }
            "map_check" => {
                a.arity(3, 3, &[])?;
                let f = self.named(
                    a.get(0),
                    pos,
                    |i| match i {
                        Item::Map(m) => Some(m.clone()),
                        _ => None,
                    },
                    "map",
                )?;
                TaskKind::MapCheck(
                    f,
                    self.structure(a.get(1), pos)?,
                    self.structure(a.get(2), pos)?,
                )
            }
            "normal_form" => {
                a.arity(1, 1, &["point", "leaf", "normal"])?;
                let g = self.structure(a.get(0), pos)?;
                let c = g.chart().clone();
                let need = |k: &str| {
                    a.named(k).ok_or_else(|| ModelError {
                        pos,
                        message: format!("missing argument {k}"),
                    })
                };
                let point = items(need("point")?)
                    .into_iter()
                    .map(|e| self.constant(&c, e))
                    .collect::<Res<Vec<_>>>()?;
                if point.len() != c.dim() {
                    return fail(pos, format!("the point needs {} coordinates", c.dim()));
                }
                let at_point = |k: &str| -> Res<Vec<Vec<Rational>>> {
                    let list = need(k)?;
                    let vs = match list {
                        Expr::Int(z) if z == "0" => vec![],
                        Expr::List(xs, _) if xs.is_empty() => vec![],
                        e => items(e),
                    };
                    vs.into_iter()
                        .map(|e| {
                            let v = self.vector(&c, e)?;
                            at(e.pos().unwrap_or(pos), v.eval_at(&point))
                        })
                        .collect()
                };
                let leaf = at_point("leaf")?;
                let normal = at_point("normal")?;
                TaskKind::NormalForm {
                    g,
                    point,
                    leaf,
                    normal,
                }
            }
            "dirac" => {
                a.arity(1, 1, &["twist"])?;
                let span = self.named(
                    a.get(0),
                    pos,
                    |i| match i {
                        Item::Span(s) => Some(s.clone()),
                        _ => None,
                    },
                    "span",
                )?;
                let twist = match a.named("twist") {
                    Some(e) => Some(self.form(span.chart(), e, Some(3))?),
                    None => None,
                };
                TaskKind::Dirac(span, twist)
            }
            _ => return fail(pos, format!("unknown task '{name}'")),
        })
    }

    fn constant(&self, c: &Chart, e: &Expr) -> Res<Rational> {
        self.scalar(c, e)?.as_constant().ok_or_else(|| ModelError {
            pos: e.pos().unwrap_or_default(),
            message: format!("'{e}' is not a constant"),
        })
    }
}

enum Frame {
    Form(usize),
    Vector(usize),
}

/// `dx` is the differential and `xv` the coordinate vector field of `x`.
fn frame_token(c: &Chart, s: &str) -> Option<Frame> {
    if let Some(i) = s.strip_prefix('d').and_then(|x| c.index_of(x)) {
        return Some(Frame::Form(i));
    }
    s.strip_suffix('v')
        .and_then(|x| c.index_of(x))
        .map(Frame::Vector)
}
