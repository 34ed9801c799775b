//! `fwps`: reports, constructions, certificates, superlattice enumeration and
//! equivalence checks for lattice Fano simplices.
//!
//! Exit codes: 0 success, 1 failed expectation or certificate, 2 usage,
//! parse or input error.

mod document;
mod report;
mod verify;

use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fwps::bounds::{extremal_simplex, volume_maximizer_simplex};
use fwps::enumeration::{classify_mult_m, ClassifyOptions};
use fwps::equivalence::is_equivalent;
use fwps::simplex::{FanoSimplex, WeightSystem, DEFAULT_POINT_CAP};
use num_bigint::BigInt;
use serde_json::{Map, Value};

use document::{int_array, SimplexDocument};
use report::{class_value, lookup, matches_expectation, matrix_value, report_value, scalar_text, summary_value, text_lines};

#[derive(Parser)]
#[command(name = "fwps", version, about = "Exact tools for lattice Fano simplices")]
struct Cli {
    /// Cap on lattice points enumerated per simplex.
    #[arg(long, global = true, env = "FWPS_POINT_CAP", default_value_t = DEFAULT_POINT_CAP)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the invariants of a simplex document, or of each line of a JSONL file.
    Analyze {
        /// Path, `-` for stdin, or an inline JSON document.
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// `key=value` checked against the report; dotted keys reach nested
        /// fields and bare flag names are looked up in `flags`.
        #[arg(long = "expect", value_name = "KEY=VALUE")]
        expect: Vec<String>,
    },
    /// Emit simplex documents for named constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check a bound or example and print a certificate.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Classify canonical superlattices of a given index.
    Enumerate {
        /// Weights of the base simplex, comma separated.
        #[arg(long, value_delimiter = ',', required_unless_present = "base", conflicts_with = "base")]
        weights: Vec<String>,
        /// Base simplex document of multiplicity one.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Index of the superlattice.
        #[arg(long)]
        index: u64,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        symmetry: Switch,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        expect_classes: Option<usize>,
    },
    /// Decide unimodular equivalence of two documents.
    Equiv { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum ConstructKind {
    Extremal {
        #[arg(long)]
        dim: usize,
    },
    VolumeMaximizer {
        #[arg(long)]
        dim: usize,
    },
    FromWeights {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<String>,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    MainTheorem {
        /// Dimension or range such as `2..8`.
        #[arg(long, default_value = "2..8", value_parser = parse_range)]
        dim: RangeInclusive<usize>,
    },
    Table1,
    Examples,
    Lemma1 {
        #[arg(long, default_value = "6..20", value_parser = parse_range)]
        n: RangeInclusive<usize>,
    },
    Fmax {
        #[arg(long, default_value = "2..20", value_parser = parse_range)]
        n: RangeInclusive<usize>,
    },
    DegreeTheorems,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Expectation(String),
}

type Outcome = Result<(), Failure>;

fn usage<E: ToString>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// `a`, `a..b` or `a..=b`, both ends inclusive.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a number: {t}"));
    let r = match s.split_once("..") {
        None => num(s).map(|a| a..=a)?,
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
    };
    if r.is_empty() {
        return Err(format!("empty range {s}"));
    }
    Ok(r)
}

fn parse_weights(ws: &[String]) -> Result<WeightSystem, Failure> {
    let v = ws
        .iter()
        .map(|w| w.trim().parse::<BigInt>().map_err(|_| usage(format!("not an integer weight: {w}"))))
        .collect::<Result<Vec<_>, _>>()?;
    WeightSystem::new(v).map_err(usage)
}

fn read_source(input: &str) -> Result<String, Failure> {
    if input.trim_start().starts_with('{') {
        return Ok(input.to_string());
    }
    if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        return Ok(s);
    }
    std::fs::read_to_string(input).map_err(|e| usage(format!("{input}: {e}")))
}

/// All JSON values in the text, whether one document or JSONL.
fn read_values(text: &str) -> Result<Vec<Value>, Failure> {
    serde_json::Deserializer::from_str(text)
        .into_iter::<Value>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("invalid JSON: {e}")))
}

fn read_document(path: &Path) -> Result<SimplexDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    SimplexDocument::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut impl Write, v: &Value) -> Outcome {
    writeln!(out, "{v}").map_err(usage)
}

fn analyze_one(v: &Value, cap: u64) -> Result<Value, String> {
    let doc = SimplexDocument::from_value(v)?;
    let r = doc.simplex()?.report(cap).map_err(|e| e.to_string())?;
    Ok(report_value(&r, &doc))
}

fn check_expectations(report: &Value, expect: &[String]) -> Result<Vec<String>, Failure> {
    let mut failed = Vec::new();
    for e in expect {
        let (k, want) = e.split_once('=').ok_or_else(|| usage(format!("expectation must be KEY=VALUE: {e}")))?;
        match lookup(report, k.trim()) {
            None => return Err(usage(format!("unknown report key: {k}"))),
            Some(got) if !matches_expectation(got, want) => {
                failed.push(format!("{k}: expected {want}, found {}", scalar_text(got)))
            }
            Some(_) => {}
        }
    }
    Ok(failed)
}

fn cmd_analyze(input: &str, format: Format, expect: &[String], cap: u64) -> Outcome {
    let values = read_values(&read_source(input)?)?;
    if values.is_empty() {
        return Err(usage("no documents in input"));
    }
    let batch = values.len() > 1;
    let mut out = io::stdout().lock();
    let mut bad_input = None;
    let mut failed = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let report = match analyze_one(v, cap) {
            Ok(r) => r,
            Err(e) if batch => {
                let mut o = Map::new();
                o.insert("error".into(), Value::String(e.clone()));
                emit(&mut out, &Value::Object(o))?;
                bad_input.get_or_insert(format!("document {}: {e}", i + 1));
                continue;
            }
            Err(e) => return Err(usage(e)),
        };
        match format {
            Format::Json => emit(&mut out, &report)?,
            Format::Text => {
                if batch && i > 0 {
                    writeln!(out).map_err(usage)?;
                }
                for line in text_lines(&report) {
                    writeln!(out, "{line}").map_err(usage)?;
                }
            }
        }
        for f in check_expectations(&report, expect)? {
            failed.push(if batch { format!("document {}: {f}", i + 1) } else { f });
        }
    }
    if let Some(e) = bad_input {
        return Err(usage(e));
    }
    if !failed.is_empty() {
        return Err(Failure::Expectation(failed.join("\n")));
    }
    Ok(())
}

fn sorted_weights(w: &WeightSystem) -> String {
    let parts: Vec<String> = w.sorted_desc().iter().map(BigInt::to_string).collect();
    format!("({})", parts.join(","))
}

fn cmd_construct(kind: &ConstructKind) -> Outcome {
    let docs: Vec<SimplexDocument> = match kind {
        ConstructKind::Extremal { dim } => {
            let s = extremal_simplex(*dim).map_err(usage)?;
            vec![SimplexDocument::new(&s, Some(&format!("extremal d={dim}")))]
        }
        ConstructKind::VolumeMaximizer { dim } => volume_maximizer_simplex(*dim)
            .map_err(usage)?
            .iter()
            .map(|s| SimplexDocument::new(s, Some(&format!("volume maximizer d={dim} weights {}", sorted_weights(&s.weight_system())))))
            .collect(),
        ConstructKind::FromWeights { weights } => {
            let w = parse_weights(weights)?;
            let s = FanoSimplex::from_weights(&w).map_err(usage)?;
            vec![SimplexDocument::new(&s, Some(&format!("weights {}", sorted_weights(&w))))]
        }
    };
    let mut out = io::stdout().lock();
    for d in &docs {
        writeln!(out, "{}", d.to_json()).map_err(usage)?;
    }
    Ok(())
}

fn cmd_verify(target: &VerifyTarget, cap: u64) -> Outcome {
    let opts = ClassifyOptions { cap, ..ClassifyOptions::default() };
    let (name, certs) = match target {
        VerifyTarget::MainTheorem { dim } => ("main-theorem", verify::main_theorem(dim.clone())),
        VerifyTarget::Table1 => ("table1", verify::table1(&opts)),
        VerifyTarget::Examples => ("examples", verify::examples(&opts)),
        VerifyTarget::Lemma1 { n } => ("lemma1", verify::lemma1(n.clone())),
        VerifyTarget::Fmax { n } => ("fmax", verify::fmax(n.clone())),
        VerifyTarget::DegreeTheorems => ("degree-theorems", verify::degree_theorems()),
    };
    let certs = certs.map_err(Failure::Usage)?;
    let pass = certs.iter().all(|c| c["pass"] == Value::Bool(true));
    let mut o = Map::new();
    o.insert("target".into(), Value::String(name.into()));
    o.insert("pass".into(), Value::Bool(pass));
    o.insert("certificates".into(), Value::Array(certs));
    emit(&mut io::stdout().lock(), &Value::Object(o))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Expectation(format!("{name}: certificate failed")))
    }
}

struct EnumerateArgs<'a> {
    weights: &'a [String],
    base: Option<&'a Path>,
    index: u64,
    symmetry: bool,
    jobs: Option<usize>,
    expect_classes: Option<usize>,
}

fn cmd_enumerate(a: EnumerateArgs<'_>, cap: u64) -> Outcome {
    let base = match a.base {
        Some(p) => {
            let s = read_document(p)?.simplex().map_err(usage)?;
            FanoSimplex::try_from(s).map_err(usage)?
        }
        None => FanoSimplex::from_weights(&parse_weights(a.weights)?).map_err(usage)?,
    };
    if a.jobs == Some(0) {
        return Err(usage("--jobs must be positive"));
    }
    let opts = ClassifyOptions { symmetry: a.symmetry, jobs: a.jobs, cap };
    let result = classify_mult_m(&base, a.index, &opts).map_err(usage)?;
    let mut out = io::stdout().lock();
    for c in &result.classes {
        emit(&mut out, &class_value(c))?;
    }
    emit(&mut out, &summary_value(&result, a.symmetry))?;
    match a.expect_classes {
        Some(n) if n != result.classes.len() => {
            Err(Failure::Expectation(format!("expected {n} classes, found {}", result.classes.len())))
        }
        _ => Ok(()),
    }
}

/// Invariants compared, in order, when no unimodular map exists.
const DISCRIMINATORS: [&str; 8] =
    ["volume", "weights", "multiplicity", "reflexive", "canonical", "terminal", "invariant_factors", "points"];

fn sorted_if_array(v: &Value) -> Value {
    match v {
        Value::Array(xs) => {
            let mut s: Vec<String> = xs.iter().map(scalar_text).collect();
            s.sort();
            Value::from(s)
        }
        other => other.clone(),
    }
}

fn cmd_equiv(a: &Path, b: &Path, cap: u64) -> Outcome {
    let (da, db) = (read_document(a)?, read_document(b)?);
    if da.dim != db.dim {
        return Err(usage(format!("dimension mismatch: {} vs {}", da.dim, db.dim)));
    }
    let (sa, sb) = (da.simplex().map_err(usage)?, db.simplex().map_err(usage)?);
    let mut o = Map::new();
    if let Some(map) = is_equivalent(&sa, &sb).map_err(usage)? {
        let mut w = Map::new();
        w.insert("matrix".into(), matrix_value(&map.matrix));
        w.insert("translation".into(), int_array(&map.translation));
        w.insert("vertex_permutation".into(), Value::from(map.vertex_permutation.clone()));
        o.insert("equivalent".into(), Value::Bool(true));
        o.insert("witness".into(), Value::Object(w));
    } else {
        let ra = report_value(&sa.report(cap).map_err(usage)?, &da);
        let rb = report_value(&sb.report(cap).map_err(usage)?, &db);
        let differing = DISCRIMINATORS.iter().find_map(|k| {
            let (x, y) = (lookup(&ra, k).cloned().unwrap_or(Value::Null), lookup(&rb, k).cloned().unwrap_or(Value::Null));
            (sorted_if_array(&x) != sorted_if_array(&y)).then(|| (k.to_string(), x, y))
        });
        let (name, x, y) = differing.unwrap_or_else(|| ("unimodular_map".into(), Value::Null, Value::Null));
        o.insert("equivalent".into(), Value::Bool(false));
        o.insert("discriminator".into(), Value::String(name));
        o.insert("a".into(), x);
        o.insert("b".into(), y);
    }
    emit(&mut io::stdout().lock(), &Value::Object(o))
}

fn run(cli: Cli) -> Outcome {
    let cap = cli.cap;
    match &cli.command {
        Command::Analyze { input, format, expect } => cmd_analyze(input, *format, expect, cap),
        Command::Construct { kind } => cmd_construct(kind),
        Command::Verify { target } => cmd_verify(target, cap),
        Command::Enumerate { weights, base, index, symmetry, jobs, expect_classes } => cmd_enumerate(
            EnumerateArgs {
                weights,
                base: base.as_deref(),
                index: *index,
                symmetry: *symmetry == Switch::On,
                jobs: *jobs,
                expect_classes: *expect_classes,
            },
            cap,
        ),
        Command::Equiv { a, b } => cmd_equiv(a, b, cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Expectation(msg)) => {
            eprintln!("fwps: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fwps: {msg}");
            ExitCode::from(2)
        }
    }
}
