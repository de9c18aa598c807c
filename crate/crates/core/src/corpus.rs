//! Named scenarios: a ring, a few elements, and assertions about them.
//!
//! Scenarios are JSON files in the crate's `corpus/` directory, embedded at
//! build time. Each assertion is a predicate over element expressions that is
//! evaluated with the ring, engine and oracle APIs; class membership on finite
//! rings is decided by the engine and confirmed by exhaustive search.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::engine::{self, EngineError, InverseKind};
use crate::oracle::{FiniteOracle, PAIR_SUITE_LIMIT};
use crate::ring::{make_ring, Element, IdealSide, Ring, RingDescriptor, RingError};

const EMBEDDED: [(&str, &str); 4] = [
    ("ex4.2", include_str!("../corpus/ex4.2.json")),
    ("ex4.4", include_str!("../corpus/ex4.4.json")),
    ("rem4.5", include_str!("../corpus/rem4.5.json")),
    ("rem4.6", include_str!("../corpus/rem4.6.json")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("malformed scenario: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// An element expression. Strings name scenario elements or the constants
/// `"0"` and `"1"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Name(String),
    Op(Op),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Star(Box<Expr>),
    /// An element in the ring's JSON encoding.
    Lit(Value),
}

/// Additive formulas whose hypotheses can be probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumOp {
    GroupSum,
    CoreSum,
    CoreSumCommuting,
    DualCoreSum,
    DualCoreSumCommuting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Eq(Expr, Expr),
    IsZero(Expr),
    /// The element has an inverse of the given kind.
    InClass { kind: InverseKind, of: Expr },
    /// `x ∈ gR` (right) or `x ∈ Rg` (left).
    InIdeal { x: Expr, of: Expr, side: IdealSide },
    /// The formula refuses `(a, b)` and names `label` among the failed
    /// hypotheses.
    HypothesisFails { op: SumOp, a: Expr, b: Expr, label: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub description: String,
    pub check: Predicate,
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub title: String,
    /// Descriptor string, e.g. `"mat:zmod:4:2"`.
    pub ring: String,
    pub elements: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub assertions: Vec<Assertion>,
}

impl Scenario {
    pub fn from_json_str(text: &str) -> Result<Scenario, CorpusError> {
        serde_json::from_str(text).map_err(|e| CorpusError::Malformed(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios always serialize")
    }

    pub fn descriptor(&self) -> Result<RingDescriptor, CorpusError> {
        Ok(self.ring.parse()?)
    }
}

/// Ids of the embedded scenarios, in a fixed order.
pub fn scenario_ids() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(id, _)| *id).collect()
}

pub fn load(id: &str) -> Result<Scenario, CorpusError> {
    let (_, text) =
        EMBEDDED.iter().find(|(k, _)| *k == id).ok_or_else(|| CorpusError::UnknownScenario(id.to_string()))?;
    Scenario::from_json_str(text)
}

/// Loads and runs an embedded scenario.
pub fn run_scenario(id: &str) -> Result<ScenarioReport, CorpusError> {
    run(&load(id)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub description: String,
    pub expected: bool,
    /// The predicate's value, or why it could not be evaluated.
    pub actual: Result<bool, String>,
    /// The concrete elements involved.
    pub detail: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.actual == Ok(self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub id: String,
    pub title: String,
    pub ring: String,
    pub elements: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub outcomes: Vec<Outcome>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(Outcome::passed)
    }

    pub fn pass_count(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {}: {}", self.id, self.title);
        let _ = writeln!(out, "ring {}", self.ring);
        for (name, value) in &self.elements {
            let _ = writeln!(out, "  {name} = {value}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        for o in &self.outcomes {
            let got = match &o.actual {
                Ok(b) => b.to_string(),
                Err(e) => format!("error ({e})"),
            };
            let mark = if o.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "[{mark}] {}: expected {}, got {got}; {}", o.description, o.expected, o.detail);
        }
        let _ = writeln!(out, "{}/{} assertions passed", self.pass_count(), self.outcomes.len());
        out
    }

    pub fn to_json(&self) -> Value {
        let outcomes: Vec<Value> = self
            .outcomes
            .iter()
            .map(|o| {
                let mut v = json!({
                    "description": o.description,
                    "expected": o.expected,
                    "passed": o.passed(),
                    "detail": o.detail,
                });
                match &o.actual {
                    Ok(b) => v["actual"] = json!(b),
                    Err(e) => v["error"] = json!(e),
                }
                v
            })
            .collect();
        let elements: serde_json::Map<String, Value> =
            self.elements.iter().map(|(k, v)| (k.clone(), Value::from(v.clone()))).collect();
        json!({
            "id": self.id,
            "title": self.title,
            "ring": self.ring,
            "elements": elements,
            "notes": self.notes,
            "outcomes": outcomes,
            "passed": self.passed(),
        })
    }
}

struct Context<'s> {
    ring: Ring,
    names: BTreeMap<&'s str, Element>,
}

impl Context<'_> {
    fn eval(&self, e: &Expr) -> Result<Element, String> {
        let r = &self.ring;
        match e {
            Expr::Name(n) => match n.as_str() {
                "0" => Ok(r.zero()),
                "1" => Ok(r.one()),
                _ => self.names.get(n.as_str()).cloned().ok_or_else(|| format!("unknown element {n:?}")),
            },
            Expr::Op(op) => Ok(match op {
                Op::Add(x, y) => r.add(&self.eval(x)?, &self.eval(y)?),
                Op::Sub(x, y) => r.sub(&self.eval(x)?, &self.eval(y)?),
                Op::Mul(x, y) => r.mul(&self.eval(x)?, &self.eval(y)?),
                Op::Neg(x) => r.neg(&self.eval(x)?),
                Op::Star(x) => r.star(&self.eval(x)?),
                Op::Lit(v) => r.from_json(v).map_err(|e| e.to_string())?,
            }),
        }
    }

    fn show(&self, e: &Element) -> String {
        self.ring.render(e)
    }

    /// Engine answer, confirmed by exhaustive search on small finite rings.
    fn in_class(&self, kind: InverseKind, a: &Element) -> Result<(bool, String), String> {
        let engine = match engine::compute(&self.ring, kind, a) {
            Ok(x) => Some(x),
            Err(e) if e.is_negative_answer() => None,
            Err(e) => return Err(e.to_string()),
        };
        let mut detail = match &engine {
            Some(x) => format!("{kind} inverse of {} is {}", self.show(a), self.show(x)),
            None => format!("{} has no {kind} inverse", self.show(a)),
        };
        if self.ring.size().is_some_and(|n| n <= PAIR_SUITE_LIMIT) {
            let oracle = FiniteOracle::new(&self.ring).map_err(|e| e.to_string())?;
            let all = oracle.find_all(kind, a).map_err(|e| e.to_string())?;
            let agrees = match &engine {
                Some(x) => all.contains(x),
                None => all.is_empty(),
            };
            if !agrees {
                return Err(format!("engine and exhaustive search disagree: {detail}, search found {} solutions", all.len()));
            }
            detail.push_str(" (confirmed by exhaustive search)");
        }
        Ok((engine.is_some(), detail))
    }

    fn check(&self, p: &Predicate) -> (Result<bool, String>, String) {
        match self.evaluate(p) {
            Ok((b, detail)) => (Ok(b), detail),
            Err(e) => (Err(e), String::new()),
        }
    }

    fn evaluate(&self, p: &Predicate) -> Result<(bool, String), String> {
        let r = &self.ring;
        match p {
            Predicate::Eq(x, y) => {
                let (x, y) = (self.eval(x)?, self.eval(y)?);
                Ok((x == y, format!("lhs {}, rhs {}", self.show(&x), self.show(&y))))
            }
            Predicate::IsZero(x) => {
                let x = self.eval(x)?;
                Ok((r.is_zero(&x), format!("value {}", self.show(&x))))
            }
            Predicate::InClass { kind, of } => self.in_class(*kind, &self.eval(of)?),
            Predicate::InIdeal { x, of, side } => {
                let (x, g) = (self.eval(x)?, self.eval(of)?);
                let w = r.in_principal_ideal(&x, &g, *side).map_err(|e| e.to_string())?;
                let detail = match (&w, side) {
                    (Some(w), IdealSide::Right) => format!("{} = {} · {}", self.show(&x), self.show(&g), self.show(w)),
                    (Some(w), IdealSide::Left) => format!("{} = {} · {}", self.show(&x), self.show(w), self.show(&g)),
                    (None, _) => format!("no w solves it for x = {}, g = {}", self.show(&x), self.show(&g)),
                };
                Ok((w.is_some(), detail))
            }
            Predicate::HypothesisFails { op, a, b, label } => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                let res = match op {
                    SumOp::GroupSum => engine::group_sum(r, &a, &b),
                    SumOp::CoreSum => engine::core_sum(r, &a, &b),
                    SumOp::CoreSumCommuting => engine::core_sum_commuting(r, &a, &b),
                    SumOp::DualCoreSum => engine::dual_core_sum(r, &a, &b),
                    SumOp::DualCoreSumCommuting => engine::dual_core_sum_commuting(r, &a, &b),
                };
                match res {
                    Err(EngineError::PreconditionViolated { failed }) => {
                        Ok((failed.contains(label), format!("failed hypotheses: {}", failed.join(", "))))
                    }
                    Ok(x) => Ok((false, format!("formula applies, giving {}", self.show(&x)))),
                    Err(e) => Err(e.to_string()),
                }
            }
        }
    }
}

/// Evaluates every assertion; evaluation errors are recorded as failures.
pub fn run(s: &Scenario) -> Result<ScenarioReport, CorpusError> {
    let ring = make_ring(s.descriptor()?)?;
    let mut names = BTreeMap::new();
    for (k, v) in &s.elements {
        if k == "0" || k == "1" {
            return Err(CorpusError::Malformed(format!("element name {k:?} is reserved")));
        }
        names.insert(k.as_str(), ring.from_json(v)?);
    }
    let ctx = Context { ring, names };
    let outcomes = s
        .assertions
        .iter()
        .map(|a| {
            let (actual, detail) = ctx.check(&a.check);
            Outcome { description: a.description.clone(), expected: a.expected, actual, detail }
        })
        .collect();
    let elements = ctx.names.iter().map(|(k, e)| (k.to_string(), ctx.show(e))).collect();
    Ok(ScenarioReport {
        id: s.id.clone(),
        title: s.title.clone(),
        ring: ctx.ring.descriptor().to_string(),
        elements,
        notes: s.notes.clone(),
        outcomes,
    })
}
