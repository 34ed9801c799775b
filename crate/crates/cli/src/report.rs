//! JSON and text renderings of reports, certificates and classes.

use fwps::bounds::BoundCertificate;
use fwps::enumeration::{ClassInfo, ClassificationResult, Counters, HnfMatrix};
use fwps::linalg::IntMatrix;
use fwps::simplex::SimplexReport;
use serde_json::{Map, Value};

use crate::document::{int_array, int_value, rational_value, SimplexDocument};

pub fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| int_array(r)).collect())
}

fn opt_bool(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

pub fn report_value(r: &SimplexReport, doc: &SimplexDocument) -> Value {
    let mut o = Map::new();
    o.insert("dim".into(), Value::from(r.dim));
    o.insert("weights".into(), r.weights.as_ref().map_or(Value::Null, |w| int_array(w.weights())));
    o.insert("h".into(), r.weights.as_ref().map_or(Value::Null, |w| int_value(w.h())));
    o.insert(
        "barycentric".into(),
        r.barycentric.as_ref().map_or(Value::Null, |b| Value::Array(b.entries().iter().map(rational_value).collect())),
    );
    o.insert("multiplicity".into(), int_value(&r.multiplicity.index));
    o.insert("invariant_factors".into(), int_array(&r.multiplicity.invariant_factors));
    o.insert("volume".into(), int_value(&r.volume));
    let f = &r.flags;
    let mut flags = Map::new();
    flags.insert("fano".into(), Value::Bool(f.fano));
    flags.insert("well_formed".into(), opt_bool(f.well_formed));
    flags.insert("canonical".into(), opt_bool(f.canonical));
    flags.insert("terminal".into(), opt_bool(f.terminal));
    flags.insert("reflexive".into(), opt_bool(f.reflexive));
    flags.insert("gorenstein_weights".into(), opt_bool(f.gorenstein_weights));
    o.insert("flags".into(), Value::Object(flags));
    o.insert("kas_bound".into(), r.kas_bound.as_ref().map_or(Value::Null, rational_value));
    o.insert("conrads_value".into(), r.conrads_value.as_ref().map_or(Value::Null, rational_value));
    o.insert("anticanonical_degree".into(), r.anticanonical_degree.as_ref().map_or(Value::Null, rational_value));
    o.insert(
        "points".into(),
        r.points.map_or(Value::Null, |p| {
            let mut m = Map::new();
            m.insert("interior".into(), Value::from(p.interior));
            m.insert("boundary".into(), Value::from(p.boundary));
            m.insert("total".into(), Value::from(p.total()));
            Value::Object(m)
        }),
    );
    o.insert("meta".into(), doc.to_value()["meta"].clone());
    Value::Object(o)
}

/// `key: value` lines, nested objects flattened with dots.
pub fn text_lines(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    flatten("", v, &mut out);
    out.into_iter().map(|(k, v)| format!("{k}: {v}")).collect()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar_text(v))),
    }
}

/// Arrays as comma-joined entries, strings unquoted.
pub fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(scalar_text).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Looks up a dotted path; a bare name also matches inside `flags`.
pub fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    let walk = |root: &'a Value| path.split('.').try_fold(root, |cur, seg| cur.get(seg));
    walk(v).or_else(|| v.get("flags").and_then(|f| f.get(path)))
}

/// Arrays compare as multisets so weights can be given in any order.
pub fn matches_expectation(actual: &Value, expected: &str) -> bool {
    match actual {
        Value::Array(xs) => {
            let mut a: Vec<String> = xs.iter().map(scalar_text).collect();
            let mut e: Vec<String> = expected
                .trim_matches(|c| matches!(c, '(' | ')' | '[' | ']' | '{' | '}'))
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            a.sort();
            e.sort();
            a == e
        }
        other => scalar_text(other) == expected.trim(),
    }
}

pub fn certificate_value(c: &BoundCertificate) -> Value {
    let mut o = Map::new();
    o.insert("statement".into(), Value::String(c.statement.into()));
    o.insert("dim".into(), Value::from(c.dim));
    o.insert("claimed".into(), rational_value(&c.claimed));
    let computed: Map<String, Value> = c.computed.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    o.insert("computed".into(), Value::Object(computed));
    o.insert(
        "witness".into(),
        c.witness.as_ref().map_or(Value::Null, |s| SimplexDocument::new(s, None).to_value()),
    );
    o.insert("pass".into(), Value::Bool(c.pass));
    Value::Object(o)
}

fn hnf_value(h: &HnfMatrix) -> Value {
    matrix_value(h.matrix())
}

pub fn class_value(c: &ClassInfo) -> Value {
    let mut o = Map::new();
    o.insert("key".into(), Value::String(String::from_utf8_lossy(&c.key).into_owned()));
    o.insert("representative".into(), SimplexDocument::new(&c.representative, None).to_value());
    o.insert("witness".into(), hnf_value(&c.witness));
    o.insert("weights".into(), int_array(c.representative.weight_system().weights()));
    o.insert("multiplicity".into(), int_value(&c.representative.multiplicity().index));
    let mut flags = Map::new();
    flags.insert("canonical".into(), Value::Bool(true));
    flags.insert("reflexive".into(), Value::Bool(c.reflexive));
    flags.insert("terminal".into(), opt_bool(c.terminal));
    o.insert("flags".into(), Value::Object(flags));
    Value::Object(o)
}

pub fn counters_value(c: &Counters) -> Value {
    let mut o = Map::new();
    o.insert("scanned".into(), Value::from(c.scanned));
    o.insert("symmetry_skipped".into(), Value::from(c.symmetry_skipped));
    o.insert("primitive_failures".into(), Value::from(c.primitive_failures));
    o.insert("canonicity_failures".into(), Value::from(c.canonicity_failures));
    o.insert("accepted".into(), Value::from(c.accepted));
    Value::Object(o)
}

pub fn summary_value(r: &ClassificationResult, symmetry: bool) -> Value {
    let mut s = Map::new();
    s.insert("base".into(), SimplexDocument::new(&r.base, None).to_value());
    s.insert("index".into(), Value::from(r.m));
    s.insert("classes".into(), Value::from(r.classes.len()));
    s.insert("symmetry".into(), Value::Bool(symmetry));
    s.insert("counters".into(), counters_value(&r.counters));
    let mut o = Map::new();
    o.insert("summary".into(), Value::Object(s));
    Value::Object(o)
}
