//! Task reports and their JSON and text renderings.

use std::fmt::Write as _;

use gencps::calculus::{KForm, KVector, Multi};
use gencps::gcps::{ConditionReport, Gcps};
use gencps::{Chart, Matrix, OneOneTensor, Rational};
use serde_json::{json, Map, Value};

use crate::model::Expect;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub label: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Condition {
    pub fn new(label: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        Condition {
            label: label.into(),
            passed,
            witness,
        }
    }

    pub fn flag(label: impl Into<String>, passed: bool) -> Self {
        Condition::new(label, passed, None)
    }
}

impl From<&ConditionReport> for Condition {
    fn from(c: &ConditionReport) -> Self {
        Condition::new(c.name, c.passed, c.witness.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskReport {
    pub index: usize,
    pub name: String,
    pub call: String,
    pub expect: Expect,
    /// Every condition held and no error occurred.
    pub outcome: bool,
    pub conditions: Vec<Condition>,
    pub data: Value,
    pub error: Option<String>,
}

impl TaskReport {
    /// The outcome matches the expectation.
    pub fn passed(&self) -> bool {
        self.outcome == (self.expect == Expect::Pass)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.tasks.iter().all(TaskReport::passed)
    }

    pub fn to_json(&self) -> Value {
        let tasks: Vec<Value> = self
            .tasks
            .iter()
            .map(|t| {
                json!({
                    "index": t.index,
                    "task": t.name,
                    "call": t.call,
                    "expect": expect_name(t.expect),
                    "outcome": t.outcome,
                    "passed": t.passed(),
                    "conditions": t.conditions.iter().map(|c| json!({
                        "label": c.label,
                        "passed": c.passed,
                        "witness": c.witness,
                    })).collect::<Vec<_>>(),
                    "data": t.data,
                    "error": t.error,
                })
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "passed": self.all_passed(),
            "tasks": tasks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            let verdict = if t.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} [{}] {} (expected {})",
                t.index,
                t.call,
                expect_name(t.expect)
            );
            for c in &t.conditions {
                let mark = if c.passed { "ok  " } else { "fail" };
                match &c.witness {
                    Some(w) => {
                        let _ = writeln!(out, "    {mark} {}: {w}", c.label);
                    }
                    None => {
                        let _ = writeln!(out, "    {mark} {}", c.label);
                    }
                }
            }
            if let Some(e) = &t.error {
                let _ = writeln!(out, "    error: {e}");
            }
        }
        let n = self.tasks.iter().filter(|t| t.passed()).count();
        let _ = writeln!(
            out,
            "{n}/{} tasks passed (seed {})",
            self.tasks.len(),
            self.seed
        );
        out
    }
}

fn expect_name(e: Expect) -> &'static str {
    match e {
        Expect::Pass => "pass",
        Expect::Fail => "fail",
    }
}

fn multi_json<K>(m: &Multi<K>, token: impl Fn(&str) -> String) -> Value {
    let c = m.chart();
    let mut terms = Map::new();
    for (idx, f) in m.comps() {
        let key = if idx.is_empty() {
            "1".to_string()
        } else {
            idx.iter()
                .map(|&i| token(c.coord(i)))
                .collect::<Vec<_>>()
                .join("^")
        };
        terms.insert(key, Value::String(f.to_string()));
    }
    json!({ "degree": m.degree(), "terms": terms })
}

pub fn form_json(f: &KForm) -> Value {
    multi_json(f, |x| format!("d{x}"))
}

pub fn multivector_json(m: &KVector) -> Value {
    multi_json(m, |x| format!("{x}v"))
}

pub fn tensor_json(t: &OneOneTensor) -> Value {
    let m = t.matrix();
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m[(i, j)].to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn rational_matrix_json(m: &Matrix<Rational>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m[(i, j)].to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect())
}

pub fn chart_json(c: &Chart) -> Value {
    json!({ "name": c.name(), "coords": c.coords() })
}

pub fn gcps_json(g: &Gcps) -> Value {
    json!({
        "chart": chart_json(g.chart()),
        "epsilon": g.epsilon().value(),
        "kind": g.epsilon().name(),
        "A": tensor_json(g.a()),
        "pi": multivector_json(g.pi()),
        "sigma": form_json(g.sigma()),
    })
}
