//! JSON encodings of spaces, states, maps and protocol reports.
//!
//! Rational values are written as `"p/q"` strings and floats as JSON numbers
//! with shortest round-trip formatting. Readers accept either form.

use serde_json::{json, Map, Value};

use crate::composites::{BipartiteEffect, BipartiteState};
use crate::cone::{ConeKind, ConeRep};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::maps::LinearMap;
use crate::protocols::{
    CheatBound, CommitmentTranscript, DecayRow, DoubleDecomposition, TeleportationCertificate, WeightedState,
};
use crate::scalar::{scalar_from_json, Arithmetic, Scalar};
use crate::space::{Observable, StateSpace};

pub fn vec_to_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn rows_to_json<S: Scalar>(rows: &[Vec<S>]) -> Value {
    Value::Array(rows.iter().map(|r| vec_to_json(r)).collect())
}

pub fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(m.row_iter().map(vec_to_json).collect())
}

pub fn vec_from_json<S: Scalar>(v: &Value) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of numbers, found {v}")))?
        .iter()
        .map(scalar_from_json)
        .collect()
}

pub fn rows_from_json<S: Scalar>(v: &Value) -> Result<Vec<Vec<S>>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?
        .iter()
        .map(vec_from_json)
        .collect()
}

pub fn matrix_from_json<S: Scalar>(v: &Value) -> Result<Matrix<S>> {
    Matrix::from_rows(&rows_from_json(v)?)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}

/// The arithmetic a document declares; `float` when the field is absent.
pub fn declared_arithmetic(v: &Value) -> Result<Arithmetic> {
    match v.get("arithmetic") {
        None => Ok(Arithmetic::Float),
        Some(a) => serde_json::from_value(a.clone()).map_err(|e| Error::Parse(format!("arithmetic: {e}"))),
    }
}

/// `{"dim", "kind", "generators", "facets", "unit", "arithmetic"}`.
pub fn space_to_json<S: Scalar>(space: &StateSpace<S>) -> Value {
    let mut m = Map::new();
    m.insert("dim".into(), json!(space.dim()));
    match space.kind() {
        ConeKind::Polyhedral => {
            m.insert("kind".into(), json!("polyhedral"));
            m.insert("generators".into(), rows_to_json(space.cone().generators().expect("polyhedral")));
            m.insert("facets".into(), rows_to_json(space.cone().facets().expect("polyhedral")));
        }
        ConeKind::Lorentz => {
            m.insert("kind".into(), json!("lorentz"));
        }
    }
    m.insert("unit".into(), vec_to_json(space.unit()));
    m.insert("arithmetic".into(), serde_json::to_value(S::ARITHMETIC).expect("enum"));
    Value::Object(m)
}

/// Inverse of [`space_to_json`]. Facets are recomputed when absent and
/// cross-checked against the generators when present.
pub fn space_from_json<S: Scalar>(v: &Value, tol: f64) -> Result<StateSpace<S>> {
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| Error::Parse("dim must be an integer".into()))? as usize;
    let kind = field(v, "kind")?.as_str().unwrap_or_default();
    let unit: Vec<S> = vec_from_json(field(v, "unit")?)?;
    check_dim(dim, unit.len())?;
    let cone = match kind {
        "polyhedral" => {
            let gens = rows_from_json(field(v, "generators")?)?;
            for g in &gens {
                check_dim(dim, g.len())?;
            }
            match v.get("facets") {
                Some(f) => ConeRep::from_parts(gens, rows_from_json(f)?, tol)?,
                None => ConeRep::from_generators_tol(gens, tol)?,
            }
        }
        "lorentz" => ConeRep::lorentz_tol(dim, tol)?,
        other => return Err(Error::Parse(format!("unknown cone kind '{other}'"))),
    };
    StateSpace::new(cone, unit)
}

/// `{"A", "B", "coords"}` with both factor spaces embedded.
pub fn bipartite_state_to_json<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>, state: &BipartiteState<S>) -> Value {
    json!({ "A": space_to_json(a), "B": space_to_json(b), "coords": matrix_to_json(state.coords()) })
}

pub fn bipartite_state_from_json<S: Scalar>(
    v: &Value,
    tol: f64,
) -> Result<(StateSpace<S>, StateSpace<S>, BipartiteState<S>)> {
    let a = space_from_json(field(v, "A")?, tol)?;
    let b = space_from_json(field(v, "B")?, tol)?;
    let coords = matrix_from_json(field(v, "coords")?)?;
    check_dim(a.dim(), coords.nrows())?;
    check_dim(b.dim(), coords.ncols())?;
    Ok((a, b, BipartiteState::new(coords)))
}

pub fn bipartite_effect_from_json<S: Scalar>(v: &Value) -> Result<BipartiteEffect<S>> {
    let coords = v.get("coords").unwrap_or(v);
    Ok(BipartiteEffect::new(matrix_from_json(coords)?))
}

pub fn map_to_json<S: Scalar>(m: &LinearMap<S>) -> Value {
    matrix_to_json(m.matrix())
}

pub fn observable_to_json<S: Scalar>(obs: &Observable<S>) -> Value {
    Value::Array(obs.effects().iter().map(|e| vec_to_json(e.functional())).collect())
}

pub fn certificate_to_json<S: Scalar>(cert: &TeleportationCertificate<S>) -> Value {
    json!({
        "mu": map_to_json(&cert.mu),
        "constant": cert.constant.as_ref().map(Scalar::to_json),
        "correction": cert.correction.as_ref().map(map_to_json),
        "verdict": cert.verdict,
        "reason": cert.reason,
    })
}

fn weighted_to_json<S: Scalar>(branch: &[WeightedState<S>]) -> Value {
    Value::Array(
        branch
            .iter()
            .map(|w| json!({ "state": vec_to_json(&w.state), "probability": w.probability.to_json() }))
            .collect(),
    )
}

pub fn decomposition_to_json<S: Scalar>(dd: &DoubleDecomposition<S>) -> Value {
    json!({
        "omega": vec_to_json(&dd.omega),
        "branch0": weighted_to_json(&dd.branch0),
        "branch1": weighted_to_json(&dd.branch1),
        "distinguishers0": rows_to_json(&dd.distinguishers0),
        "distinguishers1": rows_to_json(&dd.distinguishers1),
        "size": dd.size(),
    })
}

pub fn transcript_to_json<S: Scalar>(t: &CommitmentTranscript<S>) -> Value {
    json!({
        "seed": t.seed,
        "bit": t.bit,
        "samples": t.samples,
        "committed": rows_to_json(&t.committed),
        "reveal": { "bit": t.revealed_bit, "samples": t.revealed_samples },
        "outcomes": t.outcomes,
        "verdict": t.verdict,
    })
}

pub fn cheat_bound_to_json<S: Scalar>(b: &CheatBound<S>) -> Value {
    json!({
        "per_round": b.per_round.to_json(),
        "state": vec_to_json(&b.state),
        "labels": [b.labels.0, b.labels.1],
        "rounds": b.rounds,
        "overall": b.overall.to_json(),
        "overall_f64": b.overall.to_f64(),
    })
}

/// CSV with header `n,analytic_bound,empirical_rate,stderr`.
pub fn decay_csv(rows: &[DecayRow]) -> String {
    let mut out = String::from("n,analytic_bound,empirical_rate,stderr\n");
    for r in rows {
        out.push_str(&format!("{},{:?},{:?},{:?}\n", r.n, r.analytic_bound, r.empirical_rate, r.stderr));
    }
    out
}
