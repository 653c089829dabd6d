use std::process::Command;

use serde_json::Value;

fn msalg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_msalg"))
        .args(args)
        .env_remove("MSALG_SEED")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn validator() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/result.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn valid(doc: &Value) {
    let v = validator();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = msalg(args);
    let doc: Value = serde_json::from_str(&out).unwrap_or_else(|_| panic!("no JSON: {out} {err}"));
    valid(&doc);
    (code, doc)
}

#[test]
fn decide_exit_codes() {
    let (code, v) = json_of(&["decide", "--group", "cyclic:6", "--prime", "5", "--subject", "vg", "--json"]);
    assert_eq!(code, 2);
    assert_eq!(v["is_ms"], false);
    assert_eq!(v["witness"]["coefficients"], serde_json::json!([1, 1, 1, 1, 1, 0]));

    let (code, v) = json_of(&["decide", "--group", "cyclic:4", "--prime", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["reason"], "CHAR_ZERO_OR_LARGE_P");

    // the zero-sum condition fails for degrees [1,1,2] at p = 5: 1 + 2*2 = 5
    let (code, v) = json_of(&["decide", "--group", "symmetric:3", "--prime", "5", "--subject", "vg"]);
    assert_eq!(code, 2);
    assert_eq!(v["degrees"], serde_json::json!([1, 1, 2]));

    let (code, v) = json_of(&["decide", "--group", "symmetric:3", "--prime", "3", "--subject", "both", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["subject"], "VG_CENTRAL");

    let (code, v) = json_of(&["decide", "--group", "cyclic:3", "--prime", "2", "--subject", "central", "--emit-idempotents"]);
    assert_eq!(code, 2);
    assert_eq!(v["idempotents"].as_array().unwrap().len(), 3);

    let (code, v) = json_of(&["decide", "--group", "symmetric:4", "--prime", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["reason"], "NO_NORMAL_SYLOW");
    assert_eq!(v["witness"]["kind"], "sylow");
}

#[test]
fn decide_errors() {
    for args in [
        &["decide", "--group", "bogus:3", "--prime", "2"][..],
        &["decide", "--group", "cyclic:3", "--prime", "4"],
        &["decide", "--group", "cyclic:3"],
        &["decide", "--group", "product(cyclic:2", "--prime", "2"],
    ] {
        let (code, out, err) = msalg(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn blocks_command() {
    let (code, v) = json_of(&["blocks", "--group", "symmetric:3", "--prime", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["blocks"]["traces"], serde_json::json!([1]));
    assert_eq!(v["blocks"]["dims"], serde_json::json!([6]));
    assert_eq!(v["blocks"]["full_defect"], serde_json::json!([true]));
    let (_, v) = json_of(&["blocks", "--group", "cyclic:2", "--prime", "3"]);
    assert_eq!(v["blocks"]["traces"], serde_json::json!([2, 2]));
    let (_, v) = json_of(&["blocks", "--group", "cyclic:1", "--prime", "2", "--emit-idempotents"]);
    assert_eq!(v["count"], 1);
    assert_eq!(v["blocks"]["dims"], serde_json::json!([1]));
}

#[test]
fn degrees_command() {
    let (_, v) = json_of(&["degrees", "--group", "symmetric:3", "--prime", "5"]);
    assert_eq!(v["degrees"], serde_json::json!([1, 1, 2]));
    assert_eq!(v["computed_on"], "G");
    let (_, v) = json_of(&["degrees", "--group", "symmetric:3", "--prime", "3"]);
    assert_eq!(v["degrees"], serde_json::json!([1, 1]));
    assert_eq!(v["computed_on"], "G/H");
    let (_, v) = json_of(&["degrees", "--group", "symmetric:4", "--prime", "2"]);
    assert_eq!(v["notice"], "NO_NORMAL_SYLOW");
    assert!(v.get("degrees").is_none());
}

#[test]
fn oracle_command() {
    let (_, v) = json_of(&["oracle", "--group", "cyclic:3", "--prime", "2", "--mode", "central"]);
    // g + g^2 over GF(4): coefficient digits [0,0], [1,0], [1,0]
    let gg2 = serde_json::json!([[0, 0], [1, 0], [1, 0]]);
    let listed = v["idempotents"].as_array().unwrap();
    assert_eq!(listed.len(), 8);
    let hit = listed.iter().find(|r| r["coeffs"] == gg2).unwrap();
    assert_eq!(hit["trace"], serde_json::json!([0, 0]));
    assert!(!v["witness"].is_null());

    let (_, v) = json_of(&["oracle", "--group", "cyclic:2", "--prime", "2", "--mode", "scan"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["witnesses"], 0);

    let (_, v) = json_of(&["oracle", "--group", "symmetric:3", "--prime", "3", "--mode", "random", "--trials", "1000"]);
    assert!(v["witness"].is_null());

    let (code, _, err) = msalg(&["oracle", "--group", "cyclic:12", "--prime", "2", "--mode", "scan", "--budget-states", "100"]);
    assert_eq!(code, 1);
    assert!(err.contains("budget"));
}

#[test]
fn catalog_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    let p = path.to_str().unwrap();
    let args = ["catalog", "--max-order", "8", "--primes", "2,3", "--trials", "200", "--out", p];
    let (code, out, err) = msalg(&args);
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty());
    assert!(err.contains("0 inconsistent"));
    let first = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = first.lines().collect();
    assert!(lines.len() >= 30);
    let v = validator();
    for line in &lines {
        let doc: Value = serde_json::from_str(line).unwrap();
        assert!(v.is_valid(&doc), "{line}");
        assert_eq!(doc["consistent"], true);
    }
    let (code, _, _) = msalg(&args);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

    let (code, _, _) = msalg(&["catalog", "--max-order", "8", "--primes"]);
    assert_eq!(code, 1);
    let (code, _, _) = msalg(&["catalog", "--max-order", "128", "--primes", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_msalg"))
        .args(["decide", "--group", "cyclic:3", "--prime", "2", "--json"])
        .env("MSALG_SEED", "42")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    let (_, v) = json_of(&["decide", "--group", "cyclic:3", "--prime", "2", "--seed", "7"]);
    assert_eq!(v["seed"], 7);
}

#[test]
fn cayley_and_perm_specs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.txt");
    std::fs::write(&path, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let spec = format!("cayley:@{}", path.display());
    let (code, v) = json_of(&["decide", "--group", &spec, "--prime", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["group"], spec);
    let (code, v) = json_of(&["decide", "--group", "perm:(1 2 3)", "--prime", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 3);
}
