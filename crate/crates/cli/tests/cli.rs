use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn spms(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_spms"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(args: &[&str], stdin: &str) -> Value {
    let out = spms(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with('\n'));
    serde_json::from_str(&text).unwrap()
}

const IDENTITY: &str = r#"{"ring":"Z","n":2,"sign":1,"columns":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
const DEPTH3: &str = r#"{"columns":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[1,0,0,3]]}"#;

#[test]
fn reduce_identity_returns_itself() {
    let v = ok_json(&["reduce"], IDENTITY);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["columns"], json!([[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]));
    assert!(v["trace"].is_array());
}

#[test]
fn depth_example() {
    assert_eq!(ok_json(&["depth"], DEPTH3), json!({"depth": 3}));
}

#[test]
fn reduce_then_verify() {
    let v = ok_json(&["reduce", "--verify", "--trace", "off"], DEPTH3);
    assert_eq!(v["verified"], json!(true));
    let input = json!({ "symbol": serde_json::from_str::<Value>(DEPTH3).unwrap(), "relation": { "terms": v["terms"] } });
    assert_eq!(ok_json(&["verify"], &input.to_string()), json!({"equal": true}));
    // dropping a term breaks the equality but is not an error
    let mut terms = v["terms"].as_array().unwrap().clone();
    terms.pop();
    let input = json!({ "symbol": serde_json::from_str::<Value>(DEPTH3).unwrap(), "relation": { "terms": terms } });
    assert_eq!(ok_json(&["verify"], &input.to_string()), json!({"equal": false}));
}

#[test]
fn relation_hnf_candidate_check_id() {
    let input = json!({ "symbol": serde_json::from_str::<Value>(IDENTITY).unwrap(), "x": [1, 1, 1, 1] });
    let r = ok_json(&["relation"], &input.to_string());
    assert_eq!(r["terms"].as_array().unwrap().len(), 4);
    assert_eq!(r["d_x"], json!([]));

    let h = ok_json(&["hnf"], DEPTH3);
    assert!(h["gamma"]["entries"].is_array());
    assert_eq!(h["t"]["rows"], json!(4));

    let c = ok_json(&["candidate"], r#"{"columns":[[1,0],[2,5]]}"#);
    assert_eq!(c["index"], json!(5));

    // isotropic triples need three distinct pairs, so n = 3
    let id3 = json!({ "columns": (0..6).map(|p| (0..6).map(|q| i32::from(p == q)).collect::<Vec<_>>()).collect::<Vec<_>>() });
    let input = json!({ "symbol": id3, "x": [1, 2, 3, 4, 5, 6] });
    let k = ok_json(&["check-id"], &input.to_string());
    assert_eq!(k["holds"], json!(true));
    assert!(k["checked"].as_u64().unwrap() > 0);
}

#[test]
fn random_is_deterministic() {
    let args = ["random", "--n", "2", "--seed", "9", "--bound", "40"];
    let a = spms(&args, "");
    let b = spms(&args, "");
    assert_eq!(a.stdout, b.stdout);
    let s: Value = serde_json::from_slice(&a.stdout).unwrap();
    let d = ok_json(&["depth"], &s.to_string());
    assert!(d["depth"].as_u64().unwrap() > 1);
    let m = ok_json(&["random", "--mode", "sp-member", "--ring", "Z[i]", "--n", "3", "--seed", "1"], "");
    assert_eq!(m["ring"], json!("Z[i]"));
    assert_eq!(m["rows"], json!(6));
}

#[test]
fn reduce_output_is_byte_identical() {
    let a = spms(&["reduce"], DEPTH3);
    let b = spms(&["reduce"], DEPTH3);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn trace_out_writes_json_lines() {
    let path = std::env::temp_dir().join(format!("spms-trace-{}.jsonl", std::process::id()));
    let p = path.to_str().unwrap();
    ok_json(&["reduce", "--trace", "full", "--trace-out", p], DEPTH3);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() > 2);
    assert!(lines[0].get("pass").is_some());
    assert!(lines.last().unwrap().get("round-depths").is_some());
}

#[test]
fn exit_codes() {
    let out = spms(&["depth"], "{not json");
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], json!("parse"));

    // isotropy violation is a domain error
    let out = spms(&["depth"], r#"{"columns":[[1,0,0,0],[0,0,0,1],[0,0,1,0],[0,1,0,0]]}"#);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], json!("isotropy-violated"));
    assert!(v["detail"].is_string());

    let out = spms(&["reduce"], r#"{"ring":"Q","columns":[[1,0],[0,1]]}"#);
    assert_eq!(out.status.code(), Some(1));

    let out = spms(&["random", "--bound", "1", "--depth-bound", "1"], "");
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], json!("bound-too-small"));
}
