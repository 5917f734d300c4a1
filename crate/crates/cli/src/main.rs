//! `spms`: command-line front end.
//!
//! Every verb reads one JSON document (from `--in` or stdin, except
//! `random`) and prints one JSON document. Exit status 0 on success, 2 on a
//! domain error, 1 on malformed input.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spms::building::{chains_equal, expand, expand_all};
use spms::json::{
    candidate_to_json, error_to_json, matrix_from_json, matrix_to_json, relation_from_json, relation_to_json,
    symbol_from_json, symbol_to_json, trace_to_json, trace_to_jsonl, vector_from_json,
};
use spms::random::{random_instance, RandomInstance, RandomMode, RandomSpec};
use spms::reduction::{reduce_with, ReduceOptions, TraceLevel};
use spms::subdivision::{check_collinearity, find_candidate, find_candidate_partial, subdivision, subdivision_relation};
use spms::symplectic::{is_isotropic_set, symplectic_hnf};
use spms::{Error, IndexName, RingId, SymplecticSpace};

#[derive(Parser)]
#[command(name = "spms", version, about = "Exact symplectic modular symbol computations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Ring used for inputs that do not name one, and for `random`.
    #[arg(long, global = true, default_value = "Z", value_parser = parse_ring)]
    ring: RingId,
    /// Rank parameter for `random`.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Entry norm bound for `random`.
    #[arg(long, global = true, default_value_t = 20)]
    bound: u64,
    /// Depth bound for `random --mode deep-symbol` (defaults to `--bound`).
    #[arg(long, global = true)]
    depth_bound: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Trace::Steps)]
    trace: Trace,
    /// Input file; stdin when absent.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// After `reduce`, compare chamber chains and fail on mismatch.
    #[arg(long, global = true)]
    verify: bool,
    #[arg(long, global = true, value_enum, default_value_t = Mode::DeepSymbol)]
    mode: Mode,
    /// Also write the `reduce` trace as JSON lines to this file.
    #[arg(long, global = true)]
    trace_out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Verb {
    /// Symbol -> signed sum of unimodular symbols.
    Reduce,
    /// {"symbol", "x"?} -> subdivision relation (candidate when x is absent).
    Relation,
    /// Matrix or symbol -> symplectic Hermite form.
    Hnf,
    /// Symbol or {"columns"} -> candidate.
    Candidate,
    /// Symbol -> depth.
    Depth,
    /// {"symbol", "relation"} -> whether the chamber chains agree.
    Verify,
    /// Seeded random instance.
    Random,
    /// {"symbol", "x", "triple"?} -> collinearity identity check.
    CheckId,
}

#[derive(ValueEnum, Clone, Copy)]
enum Trace {
    Off,
    Steps,
    Full,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    SpMember,
    IsotropyMatrix,
    DeepSymbol,
}

fn parse_ring(s: &str) -> Result<RingId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", error_to_json(&e));
            ExitCode::from(if e.is_parse() { 1 } else { 2 })
        }
    }
}

fn read_input(cli: &Cli) -> Result<Value, Error> {
    let text = match &cli.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
            s
        }
    };
    let mut v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    default_ring(&mut v, cli.ring);
    Ok(v)
}

/// Inserts the `--ring` default into objects that do not name a ring.
fn default_ring(v: &mut Value, ring: RingId) {
    if let Some(o) = v.as_object_mut() {
        if o.contains_key("columns") || o.contains_key("entries") || o.contains_key("terms") {
            o.entry("ring").or_insert_with(|| json!(ring.tag()));
        }
        for key in ["symbol", "relation"] {
            if let Some(inner) = o.get_mut(key) {
                default_ring(inner, ring);
            }
        }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn run(cli: &Cli) -> Result<Value, Error> {
    match cli.verb {
        Verb::Random => random(cli),
        verb => {
            let input = read_input(cli)?;
            match verb {
                Verb::Reduce => reduce(cli, &input),
                Verb::Relation => relation(&input),
                Verb::Hnf => hnf(&input),
                Verb::Candidate => candidate(&input),
                Verb::Depth => {
                    let s = symbol_from_json(&input)?;
                    Ok(json!({ "depth": spms::json::bigint_to_json(&s.depth()?) }))
                }
                Verb::Verify => verify(&input),
                Verb::CheckId => check_id(&input),
                Verb::Random => unreachable!(),
            }
        }
    }
}

fn reduce(cli: &Cli, input: &Value) -> Result<Value, Error> {
    let s = symbol_from_json(input)?;
    let trace = match cli.trace {
        Trace::Off => TraceLevel::Off,
        Trace::Steps => TraceLevel::Steps,
        Trace::Full => TraceLevel::Full,
    };
    let (rel, tr) = reduce_with(&s, ReduceOptions { trace, verify_steps: false })?;
    if cli.verify && !chains_equal(&expand(&s), &expand_all(&rel.terms)) {
        return Err(Error::ChainMismatch("output chain differs from input chain".into()));
    }
    if let Some(path) = &cli.trace_out {
        std::fs::write(path, trace_to_jsonl(&tr))
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = json!({
        "terms": relation_to_json(&rel)["terms"].clone(),
        "trace": if trace == TraceLevel::Off { json!([]) } else { trace_to_json(&tr) },
    });
    if cli.verify {
        out["verified"] = json!(true);
    }
    Ok(out)
}

fn relation(input: &Value) -> Result<Value, Error> {
    let s = symbol_from_json(field(input, "symbol")?)?;
    let x = match input.get("x") {
        Some(x) => vector_from_json(s.ring(), x)?,
        None => find_candidate(&s)?.x,
    };
    let r = subdivision_relation(&s, &x)?;
    Ok(json!({
        "x": spms::json::vector_to_json(&x),
        "d_x": r.data.d_x.iter().map(|i| i.0).collect::<Vec<_>>(),
        "indices": r.indices.iter().map(|i| i.0).collect::<Vec<_>>(),
        "degenerate": r.degenerate.iter().map(|i| i.0).collect::<Vec<_>>(),
        "terms": relation_to_json(&r.relation)["terms"].clone(),
    }))
}

fn hnf(input: &Value) -> Result<Value, Error> {
    let m = if input.get("columns").is_some() {
        symbol_from_json(input)?.matrix()
    } else {
        matrix_from_json(input)?
    };
    if m.rows() % 2 != 0 || m.rows() == 0 {
        return Err(Error::Parse("matrix must have an even positive number of rows".into()));
    }
    let space = SymplecticSpace::new(m.rows() / 2, m.ring())?;
    let h = symplectic_hnf(&space, &m)?;
    Ok(json!({ "gamma": matrix_to_json(&h.gamma), "t": matrix_to_json(&h.t) }))
}

fn candidate(input: &Value) -> Result<Value, Error> {
    let ring: RingId = match input.get("ring").and_then(Value::as_str) {
        Some(r) => r.parse()?,
        None => RingId::Integers,
    };
    let cols = field(input, "columns")?
        .as_array()
        .ok_or_else(|| Error::Parse("columns must be an array".into()))?
        .iter()
        .map(|c| vector_from_json(ring, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(candidate_to_json(&find_candidate_partial(&cols)?))
}

fn verify(input: &Value) -> Result<Value, Error> {
    let s = symbol_from_json(field(input, "symbol")?)?;
    let mut rel = field(input, "relation")?.clone();
    if let Some(o) = rel.as_object_mut() {
        o.entry("ring").or_insert_with(|| json!(s.ring().tag()));
        o.entry("n").or_insert_with(|| json!(s.n()));
    }
    let r = relation_from_json(&rel)?;
    if r.space != s.space() {
        return Err(Error::Precondition("relation and symbol live in different spaces".into()));
    }
    Ok(json!({ "equal": chains_equal(&expand(&s), &expand_all(&r.terms)) }))
}

fn random(cli: &Cli) -> Result<Value, Error> {
    let mode = match cli.mode {
        Mode::SpMember => RandomMode::SpMember,
        Mode::IsotropyMatrix => RandomMode::IsotropyMatrix,
        Mode::DeepSymbol => RandomMode::DeepSymbol,
    };
    let spec = RandomSpec {
        ring: cli.ring,
        n: cli.n,
        entry_bound: cli.bound,
        seed: cli.seed,
        mode,
        depth_bound: cli.depth_bound,
    };
    Ok(match random_instance(&spec)? {
        RandomInstance::Matrix(m) => matrix_to_json(&m),
        RandomInstance::Symbol(s) => symbol_to_json(&s),
    })
}

fn check_id(input: &Value) -> Result<Value, Error> {
    let s = symbol_from_json(field(input, "symbol")?)?;
    let x = vector_from_json(s.ring(), field(input, "x")?)?;
    let data = subdivision(&s, &x)?;
    let n = s.n();
    let triples: Vec<[IndexName; 3]> = match input.get("triple") {
        Some(t) => {
            let t: Vec<i32> = serde_json::from_value(t.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if t.len() != 3 {
                return Err(Error::Parse("triple must have three indices".into()));
            }
            vec![[IndexName::new(t[0], n)?, IndexName::new(t[1], n)?, IndexName::new(t[2], n)?]]
        }
        None => {
            let all: Vec<IndexName> = IndexName::all(n).collect();
            let mut out = Vec::new();
            for &i in &all {
                for &j in &all {
                    for &k in &all {
                        let set = [i, j, k];
                        let distinct = i != j && j != k && i != k;
                        if distinct
                            && is_isotropic_set(&set)
                            && set.iter().filter(|t| data.in_dx(**t)).count() <= 1
                        {
                            out.push(set);
                        }
                    }
                }
            }
            out
        }
    };
    let mut holds = true;
    for [i, j, k] in &triples {
        holds &= check_collinearity(&data, *i, *j, *k)?;
    }
    Ok(json!({ "checked": triples.len(), "holds": holds }))
}
