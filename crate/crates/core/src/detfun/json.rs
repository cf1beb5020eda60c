//! JSON transport for based complexes.
//!
//! ```json
//! { "field": "Q", "lowest": 0, "dims": [1, 1], "maps": [[["5"]]] }
//! { "field": "Fp", "p": 7, "lowest": 0, "dims": [1, 1], "maps": [[[3]]] }
//! ```
//!
//! `maps[i]` is the differential out of degree `lowest + i`, listed by rows.
//! Rationals are `"a/b"` strings; 𝔽_p entries are integers in `0..p`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field::{Field, Matrix, PrimeField, Rationals};

use super::{BasedComplex, DetError};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub lowest: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<Value>>>,
}

/// A complex over whichever field the JSON names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyComplex {
    Rational(BasedComplex<Rationals>),
    Prime(BasedComplex<PrimeField>),
}

impl AnyComplex {
    pub fn from_json_str(s: &str) -> Result<Self, DetError> {
        let raw: ComplexJson = serde_json::from_str(s).map_err(|e| DetError::Json(e.to_string()))?;
        Self::from_json(&raw)
    }

    pub fn from_json(raw: &ComplexJson) -> Result<Self, DetError> {
        match (raw.field.as_str(), raw.p) {
            ("Q", None) => Ok(AnyComplex::Rational(build(Rationals, raw, parse_rational_entry)?)),
            ("Fp", Some(p)) => {
                let field = PrimeField::new(p).map_err(|e| DetError::Json(e.to_string()))?;
                Ok(AnyComplex::Prime(build(field, raw, parse_prime_entry)?))
            }
            ("Q", Some(_)) => Err(DetError::Json("field Q takes no modulus".into())),
            ("Fp", None) => Err(DetError::Json("field Fp needs \"p\"".into())),
            (other, _) => Err(DetError::Json(format!("unknown field {other:?}"))),
        }
    }

    pub fn to_json(&self) -> ComplexJson {
        match self {
            AnyComplex::Rational(c) => dump(c, "Q", None, |f, x| Value::String(f.format(x))),
            AnyComplex::Prime(c) => {
                dump(c, "Fp", Some(c.field().modulus()), |_, x| Value::from(*x))
            }
        }
    }
}

fn build<F: Field>(
    field: F,
    raw: &ComplexJson,
    entry: impl Fn(&F, &Value) -> Result<F::Elem, DetError>,
) -> Result<BasedComplex<F>, DetError> {
    let expected = raw.dims.len().saturating_sub(1);
    if raw.maps.len() != expected {
        return Err(DetError::Json(format!(
            "{} degrees need {} maps, got {}",
            raw.dims.len(),
            expected,
            raw.maps.len()
        )));
    }
    let mut maps = Vec::with_capacity(raw.maps.len());
    for (i, rows) in raw.maps.iter().enumerate() {
        let (r, c) = (raw.dims[i + 1], raw.dims[i]);
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(DetError::Json(format!("map {i} must be {r}x{c}")));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for v in row {
                data.push(entry(&field, v)?);
            }
        }
        maps.push(Matrix::from_rows(r, c, data));
    }
    BasedComplex::new(field, raw.lowest, raw.dims.clone(), maps)
}

fn parse_rational_entry(field: &Rationals, v: &Value) -> Result<num_rational::BigRational, DetError> {
    match v {
        Value::String(s) => field.parse(s).map_err(|e| DetError::Json(e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(field.from_i64(n.as_i64().unwrap())),
        other => Err(DetError::Json(format!("bad rational entry {other}"))),
    }
}

fn parse_prime_entry(field: &PrimeField, v: &Value) -> Result<u64, DetError> {
    let n = match v {
        Value::Number(n) => n.as_u64(),
        _ => None,
    };
    match n {
        Some(n) if n < field.modulus() => Ok(n),
        _ => Err(DetError::Json(format!(
            "bad F{} entry {v}; expected an integer in 0..{}",
            field.modulus(),
            field.modulus()
        ))),
    }
}

fn dump<F: Field>(
    c: &BasedComplex<F>,
    name: &str,
    p: Option<u64>,
    entry: impl Fn(&F, &F::Elem) -> Value,
) -> ComplexJson {
    let maps = c
        .maps()
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|r| m.row(r).iter().map(|x| entry(c.field(), x)).collect())
                .collect()
        })
        .collect();
    ComplexJson {
        field: name.to_string(),
        p,
        lowest: c.lowest(),
        dims: c.dims().to_vec(),
        maps,
    }
}
