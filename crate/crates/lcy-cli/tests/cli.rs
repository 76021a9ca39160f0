//! End-to-end checks of the binary: exit codes, output determinism, schema
//! conformance of every JSON emission, and the documented example values.

use serde_json::Value;
use std::process::{Command, Output};

fn lcy_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcy"))
        .args(args)
        .env_remove("LCY_MAX_L")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf8")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = lcy_cmd(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout_str(&out)
}

fn json_out(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&ok_stdout(&full)).expect("output parses as json")
}

fn exit_code(args: &[&str]) -> i32 {
    lcy_cmd(args).status.code().expect("exit code")
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn load_schema(name: &str) -> Value {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).expect("schema file readable");
    serde_json::from_str(&text).expect("schema parses")
}

/// Minimal structural validator for the subset of JSON Schema the shipped
/// files use: type, enum, required, properties, items, and local $ref.
fn validate(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    let obj = schema.as_object().ok_or_else(|| format!("{path}: schema must be an object"))?;
    if let Some(r) = obj.get("$ref").and_then(Value::as_str) {
        return validate(value, &load_schema(r), path);
    }
    if let Some(options) = obj.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{path}: {value} not among {options:?}"));
        }
    }
    if let Some(ty) = obj.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = names.iter().any(|n| match *n {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("{path}: expected {names:?}, got {value}"));
        }
    }
    if let Some(req) = obj.get("required").and_then(Value::as_array) {
        for key in req.iter().filter_map(Value::as_str) {
            if value.get(key).is_none() {
                return Err(format!("{path}: missing key {key:?}"));
            }
        }
    }
    if let (Some(props), Some(map)) =
        (obj.get("properties").and_then(Value::as_object), value.as_object())
    {
        for (key, sub) in props {
            if let Some(v) = map.get(key) {
                validate(v, sub, &format!("{path}.{key}"))?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (obj.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(v, items, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn assert_schema(value: &Value, name: &str) {
    if let Err(e) = validate(value, &load_schema(name), "$") {
        panic!("schema {name} violated: {e}");
    }
}

#[test]
fn enumerate_plane_lists_three_configs() {
    let v = json_out(&["enumerate", "--space", "M0"]);
    assert_schema(&v, "enumerate.json");
    assert_eq!(v["count"], 3);
    assert_eq!(v["toric_count"], 1);
    assert_eq!(v["configs"].as_array().unwrap().len(), 3);
    assert!(v["manifest"]["digest"].as_str().unwrap().starts_with("fnv1a:"));
    // byte-identical rerun
    let a = ok_stdout(&["enumerate", "--space", "M0", "--format", "json"]);
    let b = ok_stdout(&["enumerate", "--space", "M0", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn enumerate_tsv_is_deterministic() {
    let args = ["enumerate", "--space", "M2", "--delta", "2/5,1/5"];
    let a = ok_stdout(&args);
    assert_eq!(a, ok_stdout(&args));
    assert!(a.starts_with("# lcy enumerate --space M2 --delta 2/5,1/5 --format tsv v"));
    assert!(a.contains("count\t26\n"));
    assert!(a.contains("toric_count\t2\n"));
    assert_eq!(a.matches("\nconfig\t").count(), 26);
}

#[test]
fn count_both_prints_matching_values() {
    let out = ok_stdout(&["count", "--space", "M2", "--delta", "2/5,1/5", "--method", "both"]);
    assert_eq!(out.lines().nth(1), Some("26 / 26"));
    let v = json_out(&["count", "--space", "M2", "--delta", "2/5,1/5", "--method", "both"]);
    assert_schema(&v, "count.json");
    assert_eq!(v["formula"], 26);
    assert_eq!(v["enumerated"], 26);
    assert_eq!(v["exactness"], "exact");
    assert_eq!(v["consistent"], true);
}

#[test]
fn count_toric_formula_only() {
    let out =
        ok_stdout(&["count", "--space", "M2", "--delta", "2/5,1/5", "--toric", "--method", "formula"]);
    assert_eq!(out.lines().nth(1), Some("2"));
    let v = json_out(&["count", "--space", "quadric", "--mu", "7/3", "--method", "both"]);
    assert_schema(&v, "count.json");
    assert_eq!(v["formula"], 12);
    assert_eq!(v["consistent"], true);
}

#[test]
fn count_survives_the_formula_gap() {
    // on the equal-weights edge with weight sum one, only enumeration answers
    let args = ["count", "--space", "M2", "--delta", "1/2,1/2", "--method", "both"];
    let out = ok_stdout(&args);
    assert_eq!(out.lines().nth(1), Some("- / 7"));
    let v = json_out(&args);
    assert_schema(&v, "count.json");
    assert_eq!(v["formula"], Value::Null);
    assert_eq!(v["consistent"], Value::Null);
    assert_eq!(exit_code(&[
        "count", "--space", "M2", "--delta", "1/2,1/2", "--method", "formula",
    ]), 2);
}

#[test]
fn region_membership_answers() {
    let v = json_out(&["region", "--l", "4", "--delta", "1/6,1/6,1/6,1/6"]);
    assert_schema(&v, "region.json");
    assert_eq!(v["member"], false);
    let v = json_out(&["region", "--l", "4", "--delta", "1/2,1/5,1/10,1/20"]);
    assert_schema(&v, "region.json");
    assert_eq!(v["member"], true);
}

#[test]
fn polygon_svg_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.svg");
    let path_s = path.to_str().unwrap();
    let args = [
        "polygon", "--space", "M2", "--delta", "2/5,1/5", "--config-index", "0", "--svg", path_s,
    ];
    let v = json_out(&args);
    assert_schema(&v, "polygon.json");
    assert_eq!(v["toric_total"], 2);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    let drawing = std::fs::read(&path).unwrap();
    assert!(drawing.starts_with(b"<svg"));
    let text = String::from_utf8(drawing.clone()).unwrap();
    assert!(text.contains("viewBox"));
    assert!(text.contains("<polygon points="));
    assert!(text.contains("<text"));
    assert_eq!(
        v["svg_digest"].as_str().unwrap(),
        format!("fnv1a:{:016x}", fnv1a(&drawing))
    );
    // the drawing is reproduced byte for byte
    json_out(&args);
    assert_eq!(std::fs::read(&path).unwrap(), drawing);

    assert_eq!(exit_code(&[
        "polygon", "--space", "M2", "--delta", "2/5,1/5", "--config-index", "9",
    ]), 2);
}

#[test]
fn mutation_graph_dot_and_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let path_s = path.to_str().unwrap();
    let v = json_out(&[
        "mutation-graph", "--space", "M2", "--delta", "2/5,1/5", "--dot", path_s, "--path", "0", "1",
    ]);
    assert_schema(&v, "mutation-graph.json");
    assert_eq!(v["nodes"], 2);
    assert_eq!(v["connected"], true);
    assert_eq!(v["path"].as_array().unwrap().len(), 1);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph mutation {"));
    assert_eq!(dot.matches("->").count(), v["edges"].as_u64().unwrap() as usize);

    assert_eq!(exit_code(&[
        "mutation-graph", "--space", "M2", "--delta", "2/5,1/5", "--path", "0", "7",
    ]), 2);
}

#[test]
fn realize_reports_coverage() {
    let v = json_out(&["realize", "--space", "M2", "--delta", "2/5,1/5"]);
    assert_schema(&v, "realize.json");
    assert_eq!(v["uncovered"], 0);
    let v = json_out(&["realize", "--space", "M3", "--delta", "6/15,5/15,4/15"]);
    assert_schema(&v, "realize.json");
    assert!(v["uncovered"].as_u64().unwrap() >= 1);
    assert_eq!(
        v["uncovered"].as_u64().unwrap() as usize,
        v["uncovered_configs"].as_array().unwrap().len()
    );
}

#[test]
fn taut_verdicts() {
    let out = ok_stdout(&["taut", "--seq", "1,-2,-3,-3,-2,-3,-2"]);
    assert_eq!(out.lines().nth(1), Some("not def-taut; 5 preimages"));
    let v = json_out(&["taut", "--seq", "1,-2,-3,-3,-2,-3,-2"]);
    assert_schema(&v, "taut.json");
    assert_eq!(v["verdict"], "not-taut");
    let pre = v["preimages"].as_array().unwrap();
    assert_eq!(pre.len(), 5);
    assert!(pre.iter().any(|p| p["n"] == serde_json::json!([2, 1, 3, 2, 1, 3])));

    let out = ok_stdout(&["taut", "--seq", "1,1"]);
    assert_eq!(out.lines().nth(1), Some("taut"));
    let v = json_out(&["taut", "--seq", "-7,-7,-7"]);
    assert_eq!(v["verdict"], "undecided");
}

#[test]
fn catalog_rows_are_tab_separated() {
    let out = ok_stdout(&["catalog", "--space", "M1", "--delta", "1/2"]);
    let mut rows = 0;
    for line in out.lines().skip(1) {
        assert_eq!(line.split('\t').count(), 4, "bad row {line:?}");
        rows += 1;
    }
    assert!(rows >= 4, "only {rows} catalog rows");
    assert!(out.contains("1,-1\t0\t0\t1/2\n"));
    let v = json_out(&["catalog", "--space", "quadric", "--mu", "2"]);
    assert_schema(&v, "catalog.json");
    assert!(!v["classes"].as_array().unwrap().is_empty());
}

#[test]
fn selftest_is_green() {
    let out = lcy_cmd(&["selftest"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("ok   "));
    assert!(!text.contains("FAIL"));
    let v = json_out(&["selftest"]);
    assert_schema(&v, "selftest.json");
    assert_eq!(v["failures"], 0);
}

#[test]
fn bad_inputs_exit_with_usage_code() {
    // decimals are rejected, only exact rationals parse
    assert_eq!(exit_code(&["enumerate", "--space", "M2", "--delta", "0.4,0.2"]), 2);
    assert_eq!(exit_code(&["enumerate", "--space", "M99"]), 2);
    assert_eq!(exit_code(&["enumerate", "--space", "quadric", "--mu", "1/2"]), 2);
    assert_eq!(exit_code(&["enumerate", "--space", "quadric"]), 2);
    assert_eq!(exit_code(&["enumerate", "--space", "M2", "--delta", "2/5"]), 2);
    assert_eq!(exit_code(&["count", "--space", "M2", "--delta", "1/5,2/5"]), 2);
    assert_eq!(exit_code(&["region", "--l", "9", "--delta", "1/2"]), 2);
    assert_eq!(exit_code(&["taut", "--seq", "a,b"]), 2);
    assert_eq!(exit_code(&["no-such-command"]), 2);
}

#[test]
fn env_cap_limits_enumeration() {
    let out = Command::new(env!("CARGO_BIN_EXE_lcy"))
        .args(["enumerate", "--space", "M3", "--delta", "2/5,1/5,1/10"])
        .env("LCY_MAX_L", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_lcy"))
        .args(["enumerate", "--space", "M0"])
        .env("LCY_MAX_L", "40")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_lcy"))
        .args(["enumerate", "--space", "M3", "--delta", "2/5,1/5,1/10"])
        .env("LCY_MAX_L", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
