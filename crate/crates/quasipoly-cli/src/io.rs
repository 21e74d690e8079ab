//! JSON schemas for the command line surface.  All numbers are carried as
//! exact decimal strings or polynomial text; nothing is ever a float.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use quasipoly::ehrhart::ParamSystem;
use quasipoly::eqp::parse_qpoly;
use quasipoly::gsnf::{EqpMatrix, GSnfResult};
use quasipoly::oracle::VerificationReport;
use quasipoly::paramgeo::{HRep, VRep};
use quasipoly::polyring::{parse_poly, parse_ratfunc, IntPoly, RatFunc};
use quasipoly::{EventualQP, QPoly};

use crate::CliError;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not valid JSON: {e}", path.display())))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, CliError> {
    v.get(name)
        .ok_or_else(|| CliError::Usage(format!("missing field `{name}`")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str, CliError> {
    v.as_str()
        .ok_or_else(|| CliError::Usage(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::Usage(format!("{what} must be an array")))
}

pub fn poly_from_value(v: &Value, what: &str) -> Result<IntPoly, CliError> {
    parse_poly(as_str(v, what)?)
        .map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn poly_matrix(v: &Value, what: &str) -> Result<Vec<Vec<IntPoly>>, CliError> {
    let mut rows = Vec::new();
    for (i, row) in as_array(v, what)?.iter().enumerate() {
        let mut out = Vec::new();
        for (j, entry) in as_array(row, what)?.iter().enumerate() {
            out.push(poly_from_value(entry, &format!("{what}[{i}][{j}]"))?);
        }
        rows.push(out);
    }
    Ok(rows)
}

fn poly_vector(v: &Value, what: &str) -> Result<Vec<IntPoly>, CliError> {
    as_array(v, what)?
        .iter()
        .enumerate()
        .map(|(i, entry)| poly_from_value(entry, &format!("{what}[{i}]")))
        .collect()
}

/// `{"matrix": [["a11", ...], ...], "rhs": ["b1", ...]}` as `A x = b`.
pub fn parse_system(v: &Value) -> Result<ParamSystem, CliError> {
    let a = poly_matrix(field(v, "matrix")?, "matrix")?;
    let b = poly_vector(field(v, "rhs")?, "rhs")?;
    ParamSystem::new(a, b).map_err(|e| CliError::Usage(e.to_string()))
}

/// `{"rows": [["v11", ...], ...], "rhs": ["c1", ...]}` as `V x >= c`.
pub fn parse_hrep(v: &Value) -> Result<HRep, CliError> {
    let rows = poly_matrix(field(v, "rows")?, "rows")?;
    let rhs = poly_vector(field(v, "rhs")?, "rhs")?;
    HRep::new(rows, rhs).map_err(|e| CliError::Usage(e.to_string()))
}

/// `{"vertices": [["x1", "x2/den", ...], ...]}` with `num/den` coordinates.
pub fn parse_vrep(v: &Value) -> Result<VRep, CliError> {
    let mut vertices = Vec::new();
    for (i, vertex) in as_array(field(v, "vertices")?, "vertices")?.iter().enumerate() {
        let mut coords: Vec<RatFunc> = Vec::new();
        for (j, coord) in as_array(vertex, "vertex")?.iter().enumerate() {
            let what = format!("vertices[{i}][{j}]");
            let text = match coord {
                Value::Object(o) => {
                    let num = as_str(field(&Value::Object(o.clone()), "num")?, &what)?.to_string();
                    match o.get("den") {
                        Some(d) => format!("{num}/{}", as_str(d, &what)?),
                        None => num,
                    }
                }
                other => as_str(other, &what)?.to_string(),
            };
            coords.push(
                parse_ratfunc(&text).map_err(|e| CliError::Usage(format!("{what}: {e}")))?,
            );
        }
        vertices.push(coords);
    }
    VRep::new(vertices).map_err(|e| CliError::Usage(e.to_string()))
}

/// Polynomial-text entries, row major.
pub fn parse_poly_matrix(v: &Value) -> Result<EqpMatrix, CliError> {
    let rows = poly_matrix(field(v, "matrix")?, "matrix")?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err(CliError::Usage("matrix must be nonempty".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Usage("matrix rows must have equal length".into()));
    }
    let entries = rows
        .iter()
        .flat_map(|r| r.iter().map(EventualQP::from_poly))
        .collect();
    EqpMatrix::new(rows.len(), cols, entries).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn eqp_to_json(e: &EventualQP) -> Value {
    json!({
        "period": e.period(),
        "threshold": e.threshold().to_string(),
        "constituents": e.constituents().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "text": e.to_string(),
    })
}

/// Accepts the object emitted by `eqp_to_json`; the redundant `text` field
/// is ignored.
pub fn eqp_from_json(v: &Value) -> Result<EventualQP, CliError> {
    let period = field(v, "period")?
        .as_u64()
        .ok_or_else(|| CliError::Usage("period must be a positive integer".into()))?;
    let threshold = BigInt::from_str(as_str(field(v, "threshold")?, "threshold")?)
        .map_err(|e| CliError::Usage(format!("threshold: {e}")))?;
    let constituents: Vec<QPoly> = as_array(field(v, "constituents")?, "constituents")?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            parse_qpoly(as_str(c, "constituent")?)
                .map_err(|e| CliError::Usage(format!("constituents[{i}]: {e}")))
        })
        .collect::<Result<_, _>>()?;
    EventualQP::new(period, constituents, threshold).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn matrix_to_json(m: &EqpMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| eqp_to_json(m.get(i, j)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn snf_to_json(res: &GSnfResult, verified: bool) -> Value {
    json!({
        "d": matrix_to_json(&res.d),
        "u": matrix_to_json(&res.u),
        "v": matrix_to_json(&res.v),
        "diagonal": res.diagonal().iter().map(eqp_to_json).collect::<Vec<_>>(),
        "verified": verified,
    })
}

pub fn report_to_json(r: &VerificationReport) -> Value {
    let samples: Vec<Value> = r
        .samples
        .iter()
        .map(|s| {
            json!({
                "n": s.n.to_string(),
                "claimed": s.claimed.to_string(),
                "counted": s.counted.to_string(),
                "pass": s.pass,
            })
        })
        .collect();
    json!({
        "pass": r.pass,
        "evaluations": r.evaluations,
        "samples": samples,
    })
}

pub fn report_to_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    for s in &r.samples {
        out.push_str(&format!(
            "n = {}: claimed {} counted {} {}\n",
            s.n,
            s.claimed,
            s.counted,
            if s.pass { "ok" } else { "MISMATCH" }
        ));
    }
    out.push_str(if r.pass {
        "verification: pass\n"
    } else {
        "verification: FAIL\n"
    });
    out
}

/// Stable, deterministic serialization: objects keep insertion order via
/// `serde_json`'s default map, arrays keep construction order.
pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

pub fn sorted_object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
