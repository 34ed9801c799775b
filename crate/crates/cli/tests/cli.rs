use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use fwps::simplex::{FanoSimplex, LatticeSimplex, WeightSystem};
use serde_json::{json, Value};
use tempfile::TempDir;

fn fwps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwps")).args(args).env_remove("FWPS_POINT_CAP").output().expect("runs")
}

fn fwps_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fwps"))
        .args(args)
        .env_remove("FWPS_POINT_CAP")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("one JSON value per line")).collect()
}

fn json_of(o: &Output) -> Value {
    let mut v = lines(o);
    assert_eq!(v.len(), 1, "{}", stdout(o));
    v.pop().unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn weights_of(v: &Value) -> Vec<i64> {
    let mut w: Vec<i64> = v["weights"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    w
}

const MULT_TWO: &str = r#"{"dim":3,"vertices":[[-1,-1,-1],[1,-1,-1],[-1,2,-1],[-1,-1,9]],"meta":{"grdb":"547392"}}"#;
const P2: &str = r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,-1]]}"#;
const S_STAR: &str = r#"{"dim":3,"vertices":[[-1,-1,-1],[2,-1,-1],[-1,2,-1],[-1,-1,5]]}"#;
const P9: &str = r#"{"dim":3,"vertices":[[1,0,0],[0,1,0],[2,5,9],[-4,-7,-9]]}"#;

#[test]
fn analyze_multiplicity_two() {
    let o = fwps(&["analyze", MULT_TWO]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!(r["multiplicity"], json!(2));
    assert_eq!(weights_of(&r), vec![15, 10, 3, 2]);
    assert_eq!(r["volume"], json!(60));
    assert_eq!(r["kas_bound"], json!(2));
    assert_eq!(r["conrads_value"], json!(1));
    assert_eq!(r["flags"]["canonical"], json!(true));
    assert_eq!(r["flags"]["gorenstein_weights"], json!(true));
    // The facet through (1,-1,-1), (-1,2,-1), (-1,-1,9) is 15x + 10y + 3z = 2.
    assert_eq!(r["flags"]["reflexive"], json!(false));
    assert_eq!(r["meta"]["grdb"], json!("547392"));
}

#[test]
fn analyze_p2_text_and_expectations() {
    let o = fwps(&["analyze", P2, "--expect", "multiplicity=1", "--expect", "canonical=true", "--expect", "terminal=true"]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!(r["flags"]["reflexive"], json!(true));
    assert_eq!(r["points"]["total"], json!(4));

    let t = fwps(&["analyze", P2, "--format", "text"]);
    assert_eq!(code(&t), 0);
    let text = stdout(&t);
    assert!(text.lines().any(|l| l == "multiplicity: 1"));
    assert!(text.lines().any(|l| l == "flags.reflexive: true"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&fwps(&["analyze", "{junk"])), 2);
    assert_eq!(code(&fwps(&["analyze", r#"{"dim":2,"vertices":[[1,0],[2,0],[3,0]]}"#])), 2);
    assert_eq!(code(&fwps(&["analyze", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&fwps(&["analyze", P2, "--expect", "multiplicity=2"])), 1);
    assert_eq!(code(&fwps(&["analyze", P2, "--expect", "no_such_key=1"])), 2);
    assert_eq!(code(&fwps(&["analyze", P2, "--expect", "noequals"])), 2);
    assert_eq!(code(&fwps(&["frobnicate"])), 2);
    assert_eq!(code(&fwps(&[])), 2);
    assert_eq!(code(&fwps(&["--help"])), 0);
    assert_eq!(code(&fwps(&["construct", "extremal", "--dim", "1"])), 2);
    assert_eq!(code(&fwps(&["construct", "from-weights", "--weights", "2,x,1"])), 2);
    assert_eq!(code(&fwps(&["enumerate", "--weights", "1,1,1"])), 2);
    assert_eq!(code(&fwps(&["enumerate", "--weights", "1,1,1", "--index", "3", "--jobs", "0"])), 2);
    assert_eq!(code(&fwps(&["verify", "lemma1", "--n", "9..7"])), 2);
    let junk = fwps(&["analyze", "[1,2"]);
    assert!(!junk.stderr.is_empty());
}

#[test]
fn batch_is_one_to_one() {
    let input = format!("{P2}\n{S_STAR}\n{P9}\n");
    let o = fwps_stdin(&["analyze", "-"], &input);
    assert_eq!(code(&o), 0);
    let rs = lines(&o);
    assert_eq!(rs.len(), 3);
    let refl: Vec<_> = rs.iter().map(|r| r["flags"]["reflexive"].clone()).collect();
    assert_eq!(refl, vec![json!(true), json!(true), json!(false)]);

    let bad = fwps_stdin(&["analyze", "-"], &format!("{P2}\n{{\"dim\":1}}\n{P9}\n"));
    assert_eq!(code(&bad), 2);
    let rs = lines(&bad);
    assert_eq!(rs.len(), 3);
    assert!(rs[1].get("error").is_some());

    let failing = fwps_stdin(&["analyze", "-", "--expect", "reflexive=true"], &input);
    assert_eq!(code(&failing), 1);
    assert_eq!(lines(&failing).len(), 3);
}

#[test]
fn point_cap_from_env_and_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_fwps"));
        c.arg("analyze").arg(P9).args(extra).env_remove("FWPS_POINT_CAP");
        if let Some(e) = env {
            c.env("FWPS_POINT_CAP", e);
        }
        json_of(&c.output().unwrap())
    };
    assert_eq!(run(None, &[])["points"]["total"], json!(24));
    assert_eq!(run(Some("10"), &[])["points"], Value::Null);
    assert_eq!(run(Some("10"), &[])["flags"]["canonical"], Value::Null);
    assert_eq!(run(Some("10"), &["--cap", "1000"])["points"]["total"], json!(24));
}

#[test]
fn construct_documents() {
    let o = fwps(&["construct", "extremal", "--dim", "5"]);
    assert_eq!(code(&o), 0);
    let doc = json_of(&o);
    // conv{0, 2e1, 3e2, 7e3, 126e4, 126e5} - (1, ..., 1)
    let scales = [2, 3, 7, 126, 126];
    let mut expected: Vec<Vec<i64>> = vec![vec![-1; 5]];
    for (i, s) in scales.iter().enumerate() {
        let mut v = vec![-1; 5];
        v[i] = s - 1;
        expected.push(v);
    }
    expected.sort();
    let got: Vec<Vec<i64>> = serde_json::from_value(doc["vertices"].clone()).unwrap();
    assert_eq!(got, expected);
    let r = json_of(&fwps(&["analyze", &doc.to_string()]));
    assert_eq!(r["multiplicity"], json!(5292));

    let o = fwps(&["construct", "from-weights", "--weights", "2,2,1,1"]);
    let doc = json_of(&o);
    let r = json_of(&fwps(&["analyze", &doc.to_string()]));
    assert_eq!(r["multiplicity"], json!(1));
    assert_eq!(weights_of(&r), vec![2, 2, 1, 1]);

    let o = fwps(&["construct", "volume-maximizer", "--dim", "3"]);
    assert_eq!(code(&o), 0);
    let docs = lines(&o);
    assert_eq!(docs.len(), 2);
    for d in &docs {
        let r = json_of(&fwps(&["analyze", &d.to_string()]));
        assert_eq!(r["volume"], json!(72));
        assert_eq!(r["flags"]["canonical"], json!(true));
    }
}

#[test]
fn construct_output_round_trips() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["construct", "extremal", "--dim", "8"],
        vec!["construct", "volume-maximizer", "--dim", "5"],
        vec!["construct", "from-weights", "--weights", "15,10,3,2"],
    ] {
        let out = stdout(&fwps(&args));
        for (i, line) in out.lines().enumerate() {
            let v: Value = serde_json::from_str(line).unwrap();
            let vertices = v["vertices"].as_array().unwrap();
            let rows: Vec<String> = vertices.iter().map(|r| r.to_string()).collect();
            let mut sorted = rows.clone();
            sorted.sort_by_key(|r| {
                serde_json::from_str::<Vec<Value>>(r)
                    .unwrap()
                    .iter()
                    .map(|x| x.to_string().trim_matches('"').parse::<i128>().unwrap())
                    .collect::<Vec<_>>()
            });
            assert_eq!(rows, sorted, "vertices are sorted");
            // Equiv of a document with itself re-reads it through the parser.
            let p = write(&dir, &format!("d{i}.json"), line);
            let eq = json_of(&fwps(&["equiv", p.to_str().unwrap(), p.to_str().unwrap()]));
            assert_eq!(eq["equivalent"], json!(true));
        }
        assert_eq!(stdout(&fwps(&args)), out, "deterministic");
    }
}

#[test]
fn verify_targets() {
    let o = fwps(&["verify", "main-theorem", "--dim", "5"]);
    assert_eq!(code(&o), 0);
    let c = json_of(&o);
    assert_eq!(c["pass"], json!(true));
    assert_eq!(c["certificates"][0]["computed"]["multiplicity"], json!("5292"));

    let o = fwps(&["verify", "table1"]);
    assert_eq!(code(&o), 0);
    let c = json_of(&o);
    let got: Vec<_> = c["certificates"].as_array().unwrap().iter().map(|x| x["computed"]["maximum_multiplicity"].clone()).collect();
    assert_eq!(got, vec![json!(3), json!(2), json!(1)]);

    for args in [
        vec!["verify", "lemma1", "--n", "6..20"],
        vec!["verify", "fmax"],
        vec!["verify", "degree-theorems"],
        vec!["verify", "examples"],
    ] {
        let o = fwps(&args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert_eq!(json_of(&o)["pass"], json!(true));
    }
}

#[test]
fn enumerate_classes() {
    let o = fwps(&["enumerate", "--weights", "2,2,1,1", "--index", "9", "--expect-classes", "2"]);
    assert_eq!(code(&o), 0);
    let out = lines(&o);
    assert_eq!(out.len(), 3);
    let refl: BTreeSet<bool> = out[..2].iter().map(|c| c["flags"]["reflexive"].as_bool().unwrap()).collect();
    assert_eq!(refl, BTreeSet::from([false, true]));
    assert_eq!(out[2]["summary"]["classes"], json!(2));
    assert_eq!(out[2]["summary"]["counters"]["accepted"], json!(2));

    let o = fwps(&["enumerate", "--weights", "1,1,1,1", "--index", "16", "--expect-classes", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(lines(&o)[1]["summary"]["counters"]["scanned"], json!(651));

    assert_eq!(code(&fwps(&["enumerate", "--weights", "1,1,1,1", "--index", "16", "--expect-classes", "2"])), 1);
}

#[test]
fn enumerate_is_deterministic() {
    let base = ["enumerate", "--weights", "2,2,1,1", "--index", "9"];
    let run = |extra: &[&str]| {
        let args: Vec<&str> = base.iter().copied().chain(extra.iter().copied()).collect();
        stdout(&fwps(&args))
    };
    let one = run(&["--jobs", "1"]);
    assert_eq!(one, run(&["--jobs", "4"]));
    let off = run(&["--symmetry", "off"]);
    let classes = |s: &str| s.lines().filter(|l| !l.contains("\"summary\"")).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(classes(&one), classes(&off));
}

#[test]
fn enumerate_from_base_document() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p2.json", P2);
    let o = fwps(&["enumerate", "--base", p.to_str().unwrap(), "--index", "3", "--expect-classes", "1"]);
    assert_eq!(code(&o), 0);
    let bad = write(&dir, "p9.json", P9);
    assert_eq!(code(&fwps(&["enumerate", "--base", bad.to_str().unwrap(), "--index", "3"])), 2);
}

fn apply(m: &[Vec<i64>], t: &[i64], v: &[i64]) -> Vec<i64> {
    m.iter().zip(t).map(|(row, ti)| row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() + ti).collect()
}

fn det3(m: &[Vec<i64>]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[test]
fn equiv_outcomes() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.json", S_STAR);
    let p = write(&dir, "p.json", P9);
    let p2 = write(&dir, "p2.json", P2);

    let o = fwps(&["equiv", s.to_str().unwrap(), p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!(r["equivalent"], json!(false));
    assert_eq!(r["discriminator"], json!("reflexive"));

    let r = json_of(&fwps(&["equiv", p.to_str().unwrap(), p.to_str().unwrap()]));
    assert_eq!(r["equivalent"], json!(true));
    assert_eq!(r["witness"]["matrix"], json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
    assert_eq!(r["witness"]["translation"], json!([0, 0, 0]));

    assert_eq!(code(&fwps(&["equiv", s.to_str().unwrap(), p2.to_str().unwrap()])), 2);
}

#[test]
fn equiv_self_dual_simplex() {
    // The multiplicity-one simplex over P(15,10,3,2) against its dual.
    let w = WeightSystem::from_i64(&[15, 10, 3, 2]).unwrap();
    let s = FanoSimplex::from_weights(&w).unwrap();
    let dual = s.dual().to_lattice_simplex().expect("reflexive");
    let as_doc = |t: &LatticeSimplex| {
        let v: Vec<Vec<String>> = t.vertices().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        json!({"dim": 3, "vertices": v}).to_string()
    };
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "s.json", &as_doc(&s));
    let b = write(&dir, "dual.json", &as_doc(&dual));
    let o = fwps(&["equiv", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!(r["equivalent"], json!(true));

    let m: Vec<Vec<i64>> = serde_json::from_value(r["witness"]["matrix"].clone()).unwrap();
    let t: Vec<i64> = serde_json::from_value(r["witness"]["translation"].clone()).unwrap();
    let perm: Vec<usize> = serde_json::from_value(r["witness"]["vertex_permutation"].clone()).unwrap();
    assert_eq!(det3(&m).abs(), 1);
    let to_i64 = |t: &LatticeSimplex| -> Vec<Vec<i64>> {
        t.vertices().iter().map(|r| r.iter().map(|x| x.to_string().parse().unwrap()).collect()).collect()
    };
    let (src, dst) = (to_i64(&s), to_i64(&dual));
    for (i, v) in src.iter().enumerate() {
        assert_eq!(apply(&m, &t, v), dst[perm[i]]);
    }
}

#[test]
fn big_integers_are_strings() {
    let o = fwps(&["construct", "from-weights", "--weights", "100000000000000000,1,1"]);
    let doc = json_of(&o);
    assert!(doc["vertices"].to_string().contains("\"-100000000000000000\""));
    let r = json_of(&fwps_stdin(&["analyze", "-", "--cap", "1000"], &stdout(&o)));
    assert_eq!(r["h"], json!("100000000000000002"));
    assert_eq!(r["volume"], json!("100000000000000002"));
    assert_eq!(r["multiplicity"], json!(1));
}
