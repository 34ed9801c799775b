//! Certificate producers for `fwps verify`.

use std::ops::RangeInclusive;

use fwps::bounds::{
    certify_main_bound, certify_reflexive_degree, certify_terminal_conjecture, conrads_value, kas_bound, main_bound,
    sylvester,
};
use fwps::enumeration::{classify_mult_m, maximum_multiplicity, ClassifyOptions};
use fwps::equivalence::is_equivalent;
use fwps::optimizer::{f_value, lemma1_table, maximize_f};
use fwps::simplex::{FanoSimplex, LatticeSimplex, WeightSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::document::{int_value, rational_value};
use crate::report::certificate_value;

type Res<T> = Result<T, String>;

fn err(e: fwps::Error) -> String {
    e.to_string()
}

fn ws(v: &[i64]) -> WeightSystem {
    WeightSystem::from_i64(v).expect("positive weights")
}

/// One checked statement with its computed evidence.
struct Check {
    statement: String,
    computed: Map<String, Value>,
    pass: bool,
}

impl Check {
    fn new(statement: impl Into<String>) -> Self {
        Self { statement: statement.into(), computed: Map::new(), pass: true }
    }

    fn record(&mut self, key: &str, value: Value) {
        self.computed.insert(key.into(), value);
    }

    fn expect(&mut self, key: &str, value: Value, ok: bool) {
        self.record(key, value);
        self.pass &= ok;
    }

    fn into_value(self) -> Value {
        let mut o = Map::new();
        o.insert("statement".into(), Value::String(self.statement));
        o.insert("computed".into(), Value::Object(self.computed));
        o.insert("pass".into(), Value::Bool(self.pass));
        Value::Object(o)
    }
}

pub fn main_theorem(dims: RangeInclusive<usize>) -> Res<Vec<Value>> {
    dims.map(|d| certify_main_bound(d).map(|c| certificate_value(&c)).map_err(err)).collect()
}

pub fn table1(opts: &ClassifyOptions) -> Res<Vec<Value>> {
    [([1, 1, 1], 3u64), ([2, 1, 1], 2), ([3, 2, 1], 1)]
        .iter()
        .map(|(w, expected)| {
            let w = ws(w);
            let base = FanoSimplex::from_weights(&w).map_err(err)?;
            let (m, result) = maximum_multiplicity(&base, opts).map_err(err)?;
            let mut c = Check::new(format!("maximum multiplicity for weights {w}"));
            c.record("weights", Value::String(w.to_string()));
            c.expect("maximum_multiplicity", Value::from(m), m == *expected);
            c.record("expected", Value::from(*expected));
            c.record("classes", Value::from(result.classes.len()));
            Ok(c.into_value())
        })
        .collect()
}

fn lattice(v: &[[i64; 3]]) -> LatticeSimplex {
    LatticeSimplex::from_i64(v).expect("full-dimensional")
}

pub fn examples(opts: &ClassifyOptions) -> Res<Vec<Value>> {
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));

    // P(15,10,3,2)/(Z/2): reflexivity and self-duality belong to the
    // multiplicity-one simplex S; the non-reflexive P is recorded as such.
    let p = lattice(&[[-1, -1, -1], [1, -1, -1], [-1, 2, -1], [-1, -1, 9]]);
    let mut c1 = Check::new("multiplicity-two simplex over P(15,10,3,2)");
    let w = p.weights().map_err(err)?;
    c1.expect("weights", Value::String(w.to_string()), w.sorted_desc() == ws(&[15, 10, 3, 2]).sorted_desc());
    let mult = p.multiplicity().index;
    c1.expect("multiplicity", int_value(&mult), mult == BigInt::from(2));
    let canonical = p.is_canonical().map_err(err)?;
    c1.expect("canonical", Value::Bool(canonical), canonical);
    let kas = kas_bound(&w);
    c1.expect("kas_bound", rational_value(&kas), kas == int(2));
    let conrads = conrads_value(&w);
    c1.expect("conrads_value", rational_value(&conrads), conrads == int(1));
    c1.expect("gorenstein_weights", Value::Bool(w.is_gorenstein()), w.is_gorenstein());
    c1.record("p_reflexive", Value::Bool(p.is_reflexive().map_err(err)?));
    let s = p.restrict_to_vertex_lattice().map_err(err)?;
    let s_reflexive = s.is_reflexive().map_err(err)?;
    c1.expect("s_reflexive", Value::Bool(s_reflexive), s_reflexive);
    let self_dual = match s.dual().map_err(err)?.to_lattice_simplex() {
        Some(d) => is_equivalent(&s, &d).map_err(err)?.is_some(),
        None => false,
    };
    c1.expect("s_self_dual", Value::Bool(self_dual), self_dual);

    // P(2,2,1,1): two inequivalent canonical simplices of multiplicity 9.
    let s_star = lattice(&[[-1, -1, -1], [2, -1, -1], [-1, 2, -1], [-1, -1, 5]]);
    let q = lattice(&[[1, 0, 0], [0, 1, 0], [2, 5, 9], [-4, -7, -9]]);
    let mut c2 = Check::new("multiplicity-nine simplices over P(2,2,1,1)");
    for (name, t, reflexive) in [("s_star", &s_star, true), ("p", &q, false)] {
        let w = t.weights().map_err(err)?;
        let m = t.multiplicity().index;
        let canonical = t.is_canonical().map_err(err)?;
        let refl = t.is_reflexive().map_err(err)?;
        c2.expect(&format!("{name}_weights"), Value::String(w.to_string()), w.sorted_desc() == ws(&[2, 2, 1, 1]).sorted_desc());
        c2.expect(&format!("{name}_multiplicity"), int_value(&m), m == BigInt::from(9));
        c2.expect(&format!("{name}_canonical"), Value::Bool(canonical), canonical);
        c2.expect(&format!("{name}_reflexive"), Value::Bool(refl), refl == reflexive);
    }
    let equivalent = is_equivalent(&s_star, &q).map_err(err)?.is_some();
    c2.expect("equivalent", Value::Bool(equivalent), !equivalent);
    let base = FanoSimplex::from_weights(&ws(&[2, 2, 1, 1])).map_err(err)?;
    let result = classify_mult_m(&base, 9, opts).map_err(err)?;
    c2.expect("classes", Value::from(result.classes.len()), result.classes.len() == 2);
    let mut matched = [false, false];
    for class in &result.classes {
        for (slot, t) in matched.iter_mut().zip([&s_star, &q]) {
            if is_equivalent(&class.representative, t).map_err(err)?.is_some() {
                *slot = true;
            }
        }
    }
    c2.expect("classes_match", Value::Bool(matched == [true, true]), matched == [true, true]);

    Ok(vec![c1.into_value(), c2.into_value()])
}

pub fn lemma1(ns: RangeInclusive<usize>) -> Res<Vec<Value>> {
    ns.map(|n| {
        let t = lemma1_table(n).map_err(err)?;
        let mut c = Check::new(format!("lemma table n={n}"));
        c.record("bound", rational_value(&t.bound));
        let rows: Vec<Value> = t
            .rows
            .iter()
            .map(|r| {
                let mut o = Map::new();
                o.insert("r".into(), Value::from(r.r));
                o.insert("value".into(), rational_value(&r.value));
                o.insert("within_bound".into(), Value::Bool(r.within_bound));
                o.insert("equality".into(), Value::Bool(r.equality));
                Value::Object(o)
            })
            .collect();
        c.expect("rows", Value::Array(rows), t.holds());
        Ok(c.into_value())
    })
    .collect()
}

/// The maximum of `f_n` equals the main bound in dimension `n - 1`, attained
/// only at `l = n - 2` once `n >= 6`.
pub fn fmax(ns: RangeInclusive<usize>) -> Res<Vec<Value>> {
    ns.map(|n| {
        let m = maximize_f(n).map_err(err)?;
        let mut c = Check::new(format!("maximum of f_n for n={n}"));
        c.record("argmax", Value::Array(m.argmax.iter().map(|&l| Value::from(l)).collect()));
        c.record("value", rational_value(&m.value));
        if n >= 3 {
            let bound = BigRational::from_integer(main_bound(n - 1).map_err(err)?);
            c.expect("main_bound", rational_value(&bound), bound == m.value);
        }
        if n >= 6 {
            c.pass &= m.argmax == vec![n - 2];
            let s: BigInt = sylvester(n - 2).map_err(err)? - 1;
            let closed = BigRational::from_integer(BigInt::from(3) * &s * &s);
            c.expect("closed_form", rational_value(&closed), closed == m.value);
            c.pass &= f_value(n, n - 2).map_err(err)? == m.value;
        }
        Ok(c.into_value())
    })
    .collect()
}

pub fn degree_theorems() -> Res<Vec<Value>> {
    let mut out = Vec::new();
    let mut c = Check::new("anticanonical degree 72");
    for w in [ws(&[3, 1, 1, 1]), ws(&[6, 4, 1, 1])] {
        let deg = w.anticanonical_degree();
        c.expect(&w.to_string(), rational_value(&deg), deg == BigRational::from_integer(72.into()));
    }
    out.push(c.into_value());
    for d in 4..=5 {
        out.push(certificate_value(&certify_reflexive_degree(d).map_err(err)?));
    }
    for d in 2..=8 {
        out.push(certificate_value(&certify_terminal_conjecture(d).map_err(err)?));
    }
    Ok(out)
}
