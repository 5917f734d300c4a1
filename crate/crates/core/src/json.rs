//! JSON wire format.
//!
//! Ring elements are `[a, b]` for `a + b w` (a bare integer is accepted on
//! input). Integers are exact JSON numbers of any size; floats are rejected.
//! Objects are emitted with sorted keys, so equal values serialize to equal
//! bytes.

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::building::{Chamber, ChamberChain};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::reduction::{LinkData, ReductionTrace, TraceStep};
use crate::ring::{FieldElement, RingElement, RingId};
use crate::subdivision::Candidate;
use crate::symbol::{SignedRelation, Sl2Symbol, SymplecticSymbol};
use crate::symplectic::SymplecticSpace;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn bigint_to_json(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            s.parse::<BigInt>().map_err(|_| perr(format!("expected an integer, found {s}")))
        }
        other => Err(perr(format!("expected an integer, found {other}"))),
    }
}

pub fn element_to_json(x: &RingElement) -> Value {
    let (a, b) = x.coefficients();
    Value::Array(vec![bigint_to_json(a), bigint_to_json(b)])
}

pub fn element_from_json(ring: RingId, v: &Value) -> Result<RingElement> {
    match v {
        Value::Array(xs) if xs.len() == 2 => {
            let a = bigint_from_json(&xs[0])?;
            let b = bigint_from_json(&xs[1])?;
            if ring == RingId::Integers && b != BigInt::from(0) {
                return Err(perr("nonzero imaginary part over Z"));
            }
            Ok(RingElement::new(ring, a, b))
        }
        Value::Number(_) => Ok(RingElement::from_bigint(ring, bigint_from_json(v)?)),
        other => Err(perr(format!("expected a ring element, found {other}"))),
    }
}

pub fn vector_to_json(v: &[RingElement]) -> Value {
    Value::Array(v.iter().map(element_to_json).collect())
}

pub fn vector_from_json(ring: RingId, v: &Value) -> Result<Vector> {
    v.as_array()
        .ok_or_else(|| perr("expected an array of ring elements"))?
        .iter()
        .map(|x| element_from_json(ring, x))
        .collect()
}

fn field_to_json(x: &FieldElement) -> Value {
    json!({ "num": element_to_json(x.numerator()), "den": element_to_json(x.denominator()) })
}

fn ring_from_json(obj: &Map<String, Value>) -> Result<RingId> {
    match obj.get("ring") {
        None => Ok(RingId::Integers),
        Some(Value::String(s)) => s.parse(),
        Some(other) => Err(perr(format!("ring must be a string, found {other}"))),
    }
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| perr("expected a JSON object"))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| perr(format!("{key} must be a nonnegative integer"))),
    }
}

/// `{"ring", "rows", "cols", "entries"}` with `entries` a list of rows.
pub fn matrix_to_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows()).map(|i| vector_to_json(&m.row(i))).collect();
    json!({ "ring": m.ring().tag(), "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix> {
    let obj = object(v)?;
    let ring = ring_from_json(obj)?;
    let rows = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("matrix needs an entries array"))?
        .iter()
        .map(|r| vector_from_json(ring, r))
        .collect::<Result<Vec<_>>>()?;
    let r = usize_field(obj, "rows")?.unwrap_or(rows.len());
    let c = usize_field(obj, "cols")?.unwrap_or_else(|| rows.first().map_or(0, Vec::len));
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(perr("matrix entries do not match rows/cols"));
    }
    Matrix::new(ring, r, c, rows.into_iter().flatten().collect()).map_err(|e| perr(e.to_string()))
}

/// `{"ring", "n", "sign", "columns"}`, columns in the order
/// `1, ..., n, nbar, ..., 1bar`.
pub fn symbol_to_json(s: &SymplecticSymbol) -> Value {
    json!({
        "ring": s.ring().tag(),
        "n": s.n(),
        "sign": s.sign(),
        "columns": s.columns().iter().map(|c| vector_to_json(c)).collect::<Vec<_>>(),
    })
}

/// Columns are parsed leniently; domain checks (isotropy) run afterwards and
/// surface as domain errors.
pub fn symbol_from_json(v: &Value) -> Result<SymplecticSymbol> {
    let obj = object(v)?;
    let ring = ring_from_json(obj)?;
    let cols = obj
        .get("columns")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("symbol needs a columns array"))?
        .iter()
        .map(|c| vector_from_json(ring, c))
        .collect::<Result<Vec<_>>>()?;
    if cols.is_empty() || cols.len() % 2 != 0 {
        return Err(perr("a symbol has an even positive number of columns"));
    }
    let n = usize_field(obj, "n")?.unwrap_or(cols.len() / 2);
    let sign = match obj.get("sign") {
        None => 1,
        Some(s) => match s.as_i64() {
            Some(1) => 1,
            Some(-1) => -1,
            _ => return Err(perr("sign must be 1 or -1")),
        },
    };
    let space = SymplecticSpace::new(n, ring).map_err(|e| perr(e.to_string()))?;
    if cols.len() != space.dim() || cols.iter().any(|c| c.len() != space.dim()) {
        return Err(perr(format!("expected {0} columns of length {0}", space.dim())));
    }
    SymplecticSymbol::new(space, cols, sign)
}

pub fn sl2_to_json(s: &Sl2Symbol) -> Value {
    json!({
        "ring": s.ring().tag(),
        "n": 1,
        "sign": s.sign,
        "columns": [vector_to_json(&s.v), vector_to_json(&s.w)],
    })
}

pub fn relation_to_json(r: &SignedRelation) -> Value {
    json!({
        "ring": r.space.ring.tag(),
        "n": r.space.n,
        "terms": r.terms.iter().map(symbol_to_json).collect::<Vec<_>>(),
    })
}

pub fn relation_from_json(v: &Value) -> Result<SignedRelation> {
    let obj = object(v)?;
    let ring = ring_from_json(obj)?;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("relation needs a terms array"))?
        .iter()
        .map(|t| {
            // terms inherit the relation's ring unless they name one
            let mut t = t.clone();
            if let Some(o) = t.as_object_mut() {
                o.entry("ring").or_insert_with(|| Value::String(ring.tag().into()));
            }
            symbol_from_json(&t)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = match usize_field(obj, "n")? {
        Some(n) => n,
        None => terms.first().map(|t| t.n()).ok_or_else(|| perr("empty relation needs n"))?,
    };
    let space = SymplecticSpace::new(n, ring).map_err(|e| perr(e.to_string()))?;
    SignedRelation::new(space, terms)
}

fn chamber_to_json(c: &Chamber) -> Value {
    Value::Array(
        c.iter()
            .map(|s| Value::Array(s.basis().iter().map(|v| vector_to_json(v)).collect()))
            .collect(),
    )
}

/// `{"chambers": [{"coefficient", "flag"}]}`, each flag a list of subspace
/// bases in increasing dimension.
pub fn chain_to_json(c: &ChamberChain) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .iter()
        .map(|(ch, k)| json!({ "coefficient": k, "flag": chamber_to_json(ch) }))
        .collect();
    json!({ "chambers": entries })
}

pub fn candidate_to_json(c: &Candidate) -> Value {
    json!({
        "x": vector_to_json(&c.x),
        "coefficients": c.coefficients.iter().map(field_to_json).collect::<Vec<_>>(),
        "witness_indices": c.witness_indices.iter().map(bigint_to_json).collect::<Vec<_>>(),
        "index": bigint_to_json(&c.index),
        "w": vector_to_json(&c.w),
        "alpha": vector_to_json(&c.alpha),
        "beta": vector_to_json(&c.beta),
        "content": element_to_json(&c.content),
    })
}

pub fn link_to_json(l: &LinkData) -> Value {
    json!({
        "base": symbol_to_json(&l.base),
        "x": vector_to_json(&l.x),
        "c": element_to_json(&l.c),
        "X": matrix_to_json(&l.big_x),
        "W": matrix_to_json(&l.w),
        "m_prime": matrix_to_json(&l.m_prime),
    })
}

pub fn step_to_json(step: &TraceStep) -> Value {
    match step {
        TraceStep::Pass { depth, symbol } => {
            json!({ "pass": { "depth": bigint_to_json(depth), "symbol": symbol_to_json(symbol) } })
        }
        TraceStep::Candidate(c) => json!({ "candidate": candidate_to_json(c) }),
        TraceStep::Relation { indices, relation } => json!({
            "relation": {
                "indices": indices.iter().map(|i| i.0).collect::<Vec<_>>(),
                "terms": relation_to_json(relation)["terms"].clone(),
            }
        }),
        TraceStep::Hnf { index, gamma } => json!({ "hnf": { "index": index.0, "gamma": matrix_to_json(gamma) } }),
        TraceStep::LinkRecursion { link, sub } => json!({
            "link-recursion": { "link": link_to_json(link), "trace": trace_to_json(sub) }
        }),
        TraceStep::PairSaturation { pair, transform, terms } => json!({
            "pair-saturation": { "pair": pair + 1, "transform": matrix_to_json(transform), "terms": terms }
        }),
        TraceStep::BaseCase { input, path } => json!({
            "base-case": { "input": sl2_to_json(input), "path": path.iter().map(sl2_to_json).collect::<Vec<_>>() }
        }),
        TraceStep::Chain { label, chain } => json!({ "chain": { "label": label, "chain": chain_to_json(chain) } }),
    }
}

/// One value per top-level step, followed by the round depth log.
pub fn trace_to_json(t: &ReductionTrace) -> Value {
    let mut steps: Vec<Value> = t.steps.iter().map(step_to_json).collect();
    steps.push(json!({ "round-depths": t.round_depths.iter().map(bigint_to_json).collect::<Vec<_>>() }));
    Value::Array(steps)
}

/// JSON lines, one step per line.
pub fn trace_to_jsonl(t: &ReductionTrace) -> String {
    let mut out = String::new();
    if let Value::Array(steps) = trace_to_json(t) {
        for s in steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn error_to_json(e: &Error) -> Value {
    json!({ "error": e.code(), "detail": e.to_string() })
}
