mod common;

use common::json;
use serde_json::Value;

fn validator() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/dynprop-v1.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn every_report_matches_the_schema() {
    let v = validator();
    let runs: &[&[&str]] = &[
        &["periodic-points", "--poly", "x^2-1"],
        &["periodic-points", "--poly", "x^2-29/16", "--max-period", "3"],
        &["dynatomic", "--poly", "x^2-1", "--n", "3", "--roots", "--check"],
        &["period-bound", "--poly", "x^3-2x"],
        &["preimage-tree", "--poly", "x^2", "--root", "16", "--depth", "4"],
        &["tower", "build", "--primes", "2,3,5"],
        &["tower", "verify", "--depth", "4"],
        &["tower", "heights", "--primes", "2,3", "--depth", "2", "--eps", "0.4"],
        &["tower", "p2-bound", "--primes", "2,3,5", "--poly", "x^2-1"],
        &["tower", "inertia", "--primes", "2,3,5", "--index", "3"],
        &["tower", "p1-step", "--primes", "2,3,5", "--level", "2", "--poly", "x^2+1", "--beta", "3"],
        &["group", "normals", "--group", "A5xA5"],
        &["group", "classes", "--group", "D5"],
        &["group", "exponent", "--group", "S5"],
        &["group", "goursat", "--factors", "5,6"],
        &["powermap", "--d", "3", "--n", "4", "--k", "5"],
        &["chebyshev", "--d", "3", "--n", "3"],
        &["periodic-points", "--poly", "x^2 -"],
        &["group", "normals", "--group", "S9", "--group-order-cap", "100"],
    ];
    for args in runs {
        let (_, report) = json(args);
        let errors: Vec<String> = v.iter_errors(&report).map(|e| format!("{e} at {}", e.instance_path)).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator();
    let bad = serde_json::json!({"schema": "dynprop/v0", "command": "dynatomic", "input": {}, "result": {}});
    assert!(!v.is_valid(&bad));
    let bad = serde_json::json!({"schema": "dynprop/v1", "command": "periodic-points", "input": {},
        "result": {"mode": "certified", "certified": true, "verified": true, "orbits": [{"period": 2, "points": [0.5]}]}});
    assert!(!v.is_valid(&bad));
}
