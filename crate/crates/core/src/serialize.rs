//! Canonical textual serialization.
//!
//! Polynomials are stored as the ordered universe plus `[exponent-vector,
//! "num/den"]` pairs in canonical term order, so round trips are bit-exact.

use num::bigint::BigInt;
use num::One;
use serde_json::{json, Value};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mpoly::{Coeff, MPoly};
use crate::ratfn::RatFn;
use crate::universe::{VarInfo, VarRole, VarUniverse};

pub fn coeff_to_string(c: &Coeff) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn coeff_from_string(s: &str) -> Result<Coeff> {
    let parse_int =
        |t: &str| BigInt::from_str(t.trim()).map_err(|e| Error::Parse(format!("bad integer: {e}")));
    match s.split_once('/') {
        None => Ok(Coeff::from(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator in coefficient".into()));
            }
            Ok(Coeff::new(parse_int(n)?, den))
        }
    }
}

pub fn universe_to_json(u: &VarUniverse) -> Value {
    Value::Array(
        u.vars()
            .iter()
            .map(|v| {
                let role = match &v.role {
                    VarRole::Parameter => json!("parameter"),
                    VarRole::Alphabet { vertex, slot } => {
                        json!({"vertex": vertex + 1, "slot": slot + 1})
                    }
                };
                json!({"name": v.name, "role": role, "laurent": v.laurent})
            })
            .collect(),
    )
}

pub fn universe_from_json(v: &Value) -> Result<Arc<VarUniverse>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("universe must be an array".into()))?;
    let mut vars = Vec::with_capacity(arr.len());
    for item in arr {
        let name = item
            .get("name")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::Parse("variable needs a string name".into()))?
            .to_string();
        let laurent = item.get("laurent").and_then(|x| x.as_bool()).unwrap_or(false);
        let role = match item.get("role") {
            Some(Value::String(s)) if s == "parameter" => VarRole::Parameter,
            Some(Value::Object(o)) => {
                let vertex = o.get("vertex").and_then(|x| x.as_u64()).ok_or_else(|| {
                    Error::Parse("alphabet role needs a vertex index".into())
                })? as usize;
                let slot = o.get("slot").and_then(|x| x.as_u64()).ok_or_else(|| {
                    Error::Parse("alphabet role needs a slot index".into())
                })? as usize;
                if vertex == 0 || slot == 0 {
                    return Err(Error::Parse("vertex and slot indices are 1-based".into()));
                }
                VarRole::Alphabet {
                    vertex: vertex - 1,
                    slot: slot - 1,
                }
            }
            _ => return Err(Error::Parse(format!("bad role for variable {name}"))),
        };
        vars.push(VarInfo { name, role, laurent });
    }
    Ok(Arc::new(VarUniverse::new(vars)?))
}

pub fn terms_to_json(p: &MPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!([e, coeff_to_string(c)]))
            .collect(),
    )
}

pub fn terms_from_json(u: &Arc<VarUniverse>, v: &Value) -> Result<MPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("terms must be an array".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse("term must be [exponents, coefficient]".into()))?;
        let expo = pair[0]
            .as_array()
            .ok_or_else(|| Error::Parse("exponent vector must be an array".into()))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .map(|n| n as i32)
                    .ok_or_else(|| Error::Parse("exponent must be an integer".into()))
            })
            .collect::<Result<Vec<i32>>>()?;
        let coeff = coeff_from_string(
            pair[1]
                .as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?,
        )?;
        terms.push((expo, coeff));
    }
    MPoly::from_terms(u.clone(), terms)
}

pub fn mpoly_to_json(p: &MPoly) -> Value {
    json!({
        "universe": universe_to_json(p.universe()),
        "terms": terms_to_json(p),
    })
}

pub fn mpoly_from_json(v: &Value) -> Result<MPoly> {
    let u = universe_from_json(
        v.get("universe")
            .ok_or_else(|| Error::Parse("missing universe".into()))?,
    )?;
    terms_from_json(
        &u,
        v.get("terms")
            .ok_or_else(|| Error::Parse("missing terms".into()))?,
    )
}

pub fn ratfn_to_json(r: &RatFn) -> Value {
    json!({
        "universe": universe_to_json(r.universe()),
        "num": terms_to_json(r.num()),
        "den": terms_to_json(r.den()),
    })
}

pub fn ratfn_from_json(v: &Value) -> Result<RatFn> {
    let u = universe_from_json(
        v.get("universe")
            .ok_or_else(|| Error::Parse("missing universe".into()))?,
    )?;
    let num = terms_from_json(
        &u,
        v.get("num").ok_or_else(|| Error::Parse("missing num".into()))?,
    )?;
    let den = terms_from_json(
        &u,
        v.get("den").ok_or_else(|| Error::Parse("missing den".into()))?,
    )?;
    RatFn::new(num, den)
}
