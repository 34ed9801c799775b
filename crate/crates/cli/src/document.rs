//! The `{"dim", "vertices", "meta"}` document format.

use fwps::simplex::LatticeSimplex;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

/// Largest magnitude written as a bare JSON number.
const SAFE_INT: i64 = (1 << 53) - 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexDocument {
    pub dim: usize,
    pub vertices: Vec<Vec<BigInt>>,
    pub meta: Map<String, Value>,
}

impl SimplexDocument {
    pub fn new(simplex: &LatticeSimplex, name: Option<&str>) -> Self {
        let sorted = simplex.sorted();
        let mut meta = Map::new();
        if let Some(n) = name {
            meta.insert("name".into(), Value::String(n.into()));
        }
        Self { dim: sorted.dim(), vertices: sorted.into_vertices(), meta }
    }

    pub fn from_value(v: &Value) -> Result<Self, String> {
        let obj = v.as_object().ok_or("document must be a JSON object")?;
        let verts = obj.get("vertices").and_then(Value::as_array).ok_or("missing \"vertices\" array")?;
        let vertices = verts
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| "vertex must be an array".to_string())?
                    .iter()
                    .map(parse_int)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let dim = match obj.get("dim") {
            None => vertices.first().map_or(0, Vec::len),
            Some(d) => d.as_u64().ok_or("\"dim\" must be a non-negative integer")? as usize,
        };
        if vertices.len() != dim + 1 || vertices.iter().any(|r| r.len() != dim) {
            return Err(format!("expected {} vertices of length {dim}", dim + 1));
        }
        let meta = match obj.get("meta") {
            None | Some(Value::Null) => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err("\"meta\" must be an object".into()),
        };
        Ok(Self { dim, vertices, meta })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
        Self::from_value(&v)
    }

    pub fn simplex(&self) -> Result<LatticeSimplex, String> {
        LatticeSimplex::new(self.vertices.clone()).map_err(|e| e.to_string())
    }

    /// Fixed field order, sorted meta keys.
    pub fn to_value(&self) -> Value {
        let mut meta: Vec<_> = self.meta.iter().collect();
        meta.sort_by(|a, b| a.0.cmp(b.0));
        let mut obj = Map::new();
        obj.insert("dim".into(), Value::from(self.dim));
        obj.insert("vertices".into(), Value::Array(self.vertices.iter().map(|r| int_array(r)).collect()));
        obj.insert("meta".into(), Value::Object(meta.into_iter().map(|(k, v)| (k.clone(), v.clone())).collect()));
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }
}

/// Accepts JSON integers of any size or decimal strings.
pub fn parse_int(v: &Value) -> Result<BigInt, String> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(format!("expected an integer, found {other}")),
    };
    text.parse::<BigInt>().map_err(|_| format!("not an integer: {text}"))
}

pub fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) if v.abs() <= SAFE_INT => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn int_array(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

/// Integral rationals become integers, the rest `"p/q"` strings.
pub fn rational_value(x: &BigRational) -> Value {
    if x.is_integer() {
        int_value(x.numer())
    } else {
        Value::String(x.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_entries_become_strings() {
        let big: BigInt = BigInt::from(1u64 << 60);
        assert_eq!(int_value(&big), Value::String(big.to_string()));
        assert_eq!(int_value(&BigInt::from(-5)), Value::from(-5));
        assert_eq!(int_value(&BigInt::from(SAFE_INT + 1)), Value::String((SAFE_INT + 1).to_string()));
    }

    #[test]
    fn parses_numbers_and_strings() {
        let doc = SimplexDocument::parse(r#"{"dim":1,"vertices":[[1],["-123456789012345678901234567890"]]}"#).unwrap();
        assert_eq!(doc.vertices[1][0], "-123456789012345678901234567890".parse::<BigInt>().unwrap());
        assert!(SimplexDocument::parse(r#"{"dim":1,"vertices":[[1.5],[-1]]}"#).is_err());
        assert!(SimplexDocument::parse(r#"{"dim":2,"vertices":[[1],[-1]]}"#).is_err());
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = r#"{"dim":2,"vertices":[[-1,-1],[0,"9007199254740993"],[1,0]],"meta":{"a":1,"name":"x"}}"#;
        let doc = SimplexDocument::parse(text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert_eq!(SimplexDocument::parse(&doc.to_json()).unwrap(), doc);
    }
}
