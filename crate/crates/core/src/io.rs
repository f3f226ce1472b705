//! JSON description files for modules and special fibers.
//!
//! Scalars are integers, `"num/den"` strings, or `{"a": .., "b": ..}` for
//! `a + b√p`. Matrices are arrays of rows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{Field, Matrix, Scalar};
use crate::degeneration::{FiberSpec, PairingSpec, PieceSpec, RestrictionSpec, StratumSpec};
use crate::error::{Error, Result};
use crate::phimod::{mk_phin, PhiNModule};

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

/// Parses JSON text, reporting syntax errors by line, column and byte offset.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let offset = byte_offset(text, e.line(), e.column());
        parse_err(format!("line {}, column {} (byte {})", e.line(), e.column(), offset), e.to_string())
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Reads `"n"` or `"num/den"`.
pub fn rational_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None => Err(parse_err(path, format!("{n} is not an integer; write non-integers as \"num/den\""))),
        },
        Value::String(s) => rational_from_str(s).ok_or_else(|| parse_err(path, format!("cannot read {s:?} as a rational"))),
        _ => Err(parse_err(path, "expected a rational")),
    }
}

fn scalar(v: &Value, path: &str) -> Result<Scalar> {
    match v {
        Value::Object(m) => {
            check_keys(m, &["a", "b"], path)?;
            let get = |k: &str| m.get(k).map_or(Ok(BigRational::zero()), |x| rational(x, &format!("{path}.{k}")));
            Ok(Scalar::new(get("a")?, get("b")?))
        }
        other => Ok(Scalar::rational(rational(other, path)?)),
    }
}

fn matrix(v: &Value, path: &str, shape: Option<(usize, usize)>) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| parse_err(&rp, "expected a row array"))?;
        let entries = row.iter().enumerate().map(|(j, e)| scalar(e, &format!("{rp}[{j}]"))).collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first() {
            let first: &Vec<Scalar> = first;
            if first.len() != entries.len() {
                return Err(parse_err(&rp, format!("row has {} entries, expected {}", entries.len(), first.len())));
            }
        }
        out.push(entries);
    }
    let ncols = out.first().map_or(0, Vec::len);
    if let Some((r, c)) = shape {
        if out.len() != r || (r > 0 && ncols != c) {
            return Err(parse_err(path, format!("expected a {r}×{c} matrix, got {}×{ncols}", out.len())));
        }
        if r == 0 {
            return Ok(Matrix::zeros(0, c));
        }
    }
    Ok(Matrix::from_fn(out.len(), ncols, |i, j| out[i][j].clone()))
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(parse_err(join(path, k), "unknown field"));
        }
    }
    Ok(())
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(if path.is_empty() { "<root>" } else { path }, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| parse_err(join(path, key), "missing field"))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(path, "expected a nonnegative integer"))
}

fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(path, "expected an integer"))
}

fn labels(v: &Value, path: &str) -> Result<Vec<String>> {
    let arr = v.as_array().ok_or_else(|| parse_err(path, "expected a list of labels"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| x.as_str().map(str::to_string).ok_or_else(|| parse_err(format!("{path}[{i}]"), "expected a string label")))
        .collect()
}

/// Attaches a field path to validation errors raised while building a value.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_err(path, other.to_string()),
    })
}

/// A `(φ,N)`-module from `{"dim", "phi", "n"?}`.
pub fn module_from_value(v: &Value, f: &Field) -> Result<PhiNModule> {
    let m = object(v, "")?;
    check_keys(m, &["dim", "phi", "n"], "")?;
    let dim = uint(field(m, "dim", "")?, "dim")? as usize;
    let phi = matrix(field(m, "phi", "")?, "phi", Some((dim, dim)))?;
    let n = m.get("n").map(|x| matrix(x, "n", Some((dim, dim)))).transpose()?;
    // invertibility and the relation are checked here, so keep their own variants
    mk_phin(phi, n, f)
}

pub fn parse_module(text: &str, f: &Field) -> Result<PhiNModule> {
    module_from_value(&parse_json(text)?, f)
}

/// A fiber description; semantic checks are left to `validate_fiber`.
pub fn fiber_spec_from_value(v: &Value) -> Result<FiberSpec> {
    let m = object(v, "")?;
    check_keys(m, &["prime", "relative_dimension", "components", "strata", "restrictions", "pairings"], "")?;
    let prime = uint(field(m, "prime", "")?, "prime")?;
    let relative_dimension = uint(field(m, "relative_dimension", "")?, "relative_dimension")? as usize;
    let components = labels(field(m, "components", "")?, "components")?;

    let strata_v = field(m, "strata", "")?.as_array().ok_or_else(|| parse_err("strata", "expected a list"))?;
    let mut strata = Vec::new();
    for (i, s) in strata_v.iter().enumerate() {
        let sp = format!("strata[{i}]");
        let sm = object(s, &sp)?;
        check_keys(sm, &["J", "cohomology"], &sp)?;
        let comps = labels(field(sm, "J", &sp)?, &join(&sp, "J"))?;
        let cp = join(&sp, "cohomology");
        let coh = object(field(sm, "cohomology", &sp)?, &cp)?;
        let mut cohomology = BTreeMap::new();
        for (deg, pieces) in coh {
            let dp = join(&cp, deg);
            let degree: i64 = deg.parse().map_err(|_| parse_err(&dp, "degree keys must be integers"))?;
            let arr = pieces.as_array().ok_or_else(|| parse_err(&dp, "expected a list of pieces"))?;
            let mut out = Vec::new();
            for (k, piece) in arr.iter().enumerate() {
                let pp = format!("{dp}[{k}]");
                let pm = object(piece, &pp)?;
                check_keys(pm, &["weight", "dim", "phi"], &pp)?;
                let weight = int(field(pm, "weight", &pp)?, &join(&pp, "weight"))?;
                let dim = uint(field(pm, "dim", &pp)?, &join(&pp, "dim"))? as usize;
                let phi = pm.get("phi").map(|x| matrix(x, &join(&pp, "phi"), Some((dim, dim)))).transpose()?;
                out.push(PieceSpec { weight, dim, phi });
            }
            cohomology.insert(degree, out);
        }
        strata.push(StratumSpec { components: comps, cohomology });
    }

    let mut restrictions = Vec::new();
    if let Some(rs) = m.get("restrictions") {
        let arr = rs.as_array().ok_or_else(|| parse_err("restrictions", "expected a list"))?;
        for (i, r) in arr.iter().enumerate() {
            let rp = format!("restrictions[{i}]");
            let rm = object(r, &rp)?;
            check_keys(rm, &["from", "to", "degree", "matrix"], &rp)?;
            restrictions.push(RestrictionSpec {
                from: labels(field(rm, "from", &rp)?, &join(&rp, "from"))?,
                to: labels(field(rm, "to", &rp)?, &join(&rp, "to"))?,
                degree: int(field(rm, "degree", &rp)?, &join(&rp, "degree"))?,
                matrix: matrix(field(rm, "matrix", &rp)?, &join(&rp, "matrix"), None)?,
            });
        }
    }

    let mut pairings = Vec::new();
    if let Some(ps) = m.get("pairings") {
        let arr = ps.as_array().ok_or_else(|| parse_err("pairings", "expected a list"))?;
        for (i, p) in arr.iter().enumerate() {
            let pp = format!("pairings[{i}]");
            let pm = object(p, &pp)?;
            check_keys(pm, &["J", "degree", "matrix"], &pp)?;
            pairings.push(PairingSpec {
                stratum: labels(field(pm, "J", &pp)?, &join(&pp, "J"))?,
                degree: int(field(pm, "degree", &pp)?, &join(&pp, "degree"))?,
                matrix: matrix(field(pm, "matrix", &pp)?, &join(&pp, "matrix"), None)?,
            });
        }
    }
    at("prime", Field::new(prime).map(|_| ()))?;
    Ok(FiberSpec { prime, relative_dimension, components, strata, restrictions, pairings })
}

pub fn parse_fiber_spec(text: &str) -> Result<FiberSpec> {
    fiber_spec_from_value(&parse_json(text)?)
}

fn rational_value(q: &BigRational) -> Value {
    if q.denom().is_one() {
        match i64::try_from(q.numer()) {
            Ok(i) => json!(i),
            Err(_) => json!(q.numer().to_string()),
        }
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn scalar_value(s: &Scalar) -> Value {
    if s.is_rational() {
        rational_value(&s.a)
    } else {
        json!({"a": rational_value(&s.a), "b": rational_value(&s.b)})
    }
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| scalar_value(m.get(i, j))).collect())).collect())
}

pub fn module_value(d: &PhiNModule) -> Value {
    let mut v = json!({"dim": d.dim(), "phi": matrix_value(d.phi())});
    if !d.monodromy().is_zero() {
        v["n"] = matrix_value(d.monodromy());
    }
    v
}

pub fn fiber_spec_value(spec: &FiberSpec) -> Value {
    let strata: Vec<Value> = spec
        .strata
        .iter()
        .map(|s| {
            let coh: Map<String, Value> = s
                .cohomology
                .iter()
                .map(|(deg, pieces)| {
                    let ps = pieces
                        .iter()
                        .map(|p| {
                            let mut v = json!({"weight": p.weight, "dim": p.dim});
                            if let Some(phi) = &p.phi {
                                v["phi"] = matrix_value(phi);
                            }
                            v
                        })
                        .collect();
                    (deg.to_string(), Value::Array(ps))
                })
                .collect();
            json!({"J": s.components, "cohomology": coh})
        })
        .collect();
    let restrictions: Vec<Value> = spec
        .restrictions
        .iter()
        .map(|r| json!({"from": r.from, "to": r.to, "degree": r.degree, "matrix": matrix_value(&r.matrix)}))
        .collect();
    let mut v = json!({
        "prime": spec.prime,
        "relative_dimension": spec.relative_dimension,
        "components": spec.components,
        "strata": strata,
        "restrictions": restrictions,
    });
    if !spec.pairings.is_empty() {
        v["pairings"] = spec
            .pairings
            .iter()
            .map(|p| json!({"J": p.stratum, "degree": p.degree, "matrix": matrix_value(&p.matrix)}))
            .collect();
    }
    v
}
