mod common;

use common::{dynprop, dynprop_env, json};
use serde_json::json;

#[test]
fn periodic_points_of_x2_minus_1() {
    let (code, v) = json(&["periodic-points", "--poly", "x^2-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "dynprop/v1");
    assert_eq!(v["command"], "periodic-points");
    let r = &v["result"];
    assert_eq!(r["bound"], 24);
    assert_eq!(r["certified"], true);
    assert_eq!(r["orbits"], json!([{"period": 2, "points": ["-1", "0"]}]));
    assert_eq!(r["certificate"]["primes"], json!([2, 3]));
}

#[test]
fn human_output_shows_the_same_numbers() {
    let out = dynprop(&["periodic-points", "--poly", "x^2-1"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("bound: 24"));
    assert!(s.contains("points: [-1, 0]"));
}

#[test]
fn bounded_search_is_marked_uncertified() {
    let (code, v) = json(&["periodic-points", "--poly", "x^2-29/16", "--max-period", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certified"], false);
    assert_eq!(v["result"]["orbits"][0]["period"], 3);
    assert_eq!(v["result"]["orbits"][0]["points"], json!(["-7/4", "5/4", "-1/4"]));
}

#[test]
fn tower_heights_depth_two() {
    let (code, v) = json(&["tower", "heights", "--primes", "2,3", "--depth", "2"]);
    assert_eq!(code, 0);
    let levels = v["result"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[0]["exact"], json!({"2": "1/2"}));
    assert_eq!(levels[1]["exact"], json!({"2": "1/6", "3": "1/3"}));
    assert!(levels[1]["decimal"].as_str().unwrap().starts_with("0.4817286263160274487"));
}

#[test]
fn eps_threshold() {
    let (code, v) = json(&["tower", "heights", "--depth", "13", "--eps", "0.1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["first_level_below_eps"], 13);
    assert_eq!(v["input"]["eps"], "1/10");
}

#[test]
fn malformed_polynomial_exits_2() {
    let out = dynprop(&["periodic-points", "--poly", "x^2 -"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    let (code, v) = json(&["periodic-points", "--poly", "x^2 -"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn contract_violations_exit_2() {
    for args in [
        &["periodic-points", "--poly", "3x+1"][..],
        &["tower", "build", "--primes", "2,4"],
        &["tower", "p2-bound", "--primes", "2,3", "--poly", "x^2/3"],
        &["group", "goursat", "--factors", "4,5"],
        &["powermap", "--d", "2", "--n", "3", "--k", "7"],
    ] {
        assert_eq!(dynprop(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(dynprop(&["periodic-points", "--polly", "x^2"]).status.code(), Some(2));
}

#[test]
fn resource_caps_exit_3() {
    let out = dynprop(&["group", "normals", "--group", "S9", "--group-order-cap", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let out = dynprop(&["dynatomic", "--poly", "x^2+1", "--n", "10", "--poly-degree-cap", "512"]);
    assert_eq!(out.status.code(), Some(3));
    let (code, v) = json(&["preimage-tree", "--poly", "x^2", "--root", "1", "--depth", "30", "--tree-node-cap", "5"]);
    // 1 is its own preimage, so the tree never terminates
    assert_eq!((code, v["error"]["kind"].as_str()), (3, Some("resource")));
}

#[test]
fn precision_precedence() {
    let dir = std::env::temp_dir().join(format!("dynprop-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "precision_bits = 64\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let bits = |out: std::process::Output| -> serde_json::Value {
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["input"]["precision_bits"].clone()
    };
    let base = ["tower", "heights", "--depth", "1", "--json", "--config", cfg_s];
    assert_eq!(bits(dynprop_env(&base, &[])), 64);
    assert_eq!(bits(dynprop_env(&base, &[("DYNPROP_PRECISION_BITS", "96")])), 96);
    let mut flagged = base.to_vec();
    flagged.extend(["--precision-bits", "200"]);
    assert_eq!(bits(dynprop_env(&flagged, &[("DYNPROP_PRECISION_BITS", "96")])), 200);
    assert_eq!(dynprop_env(&base, &[("DYNPROP_PRECISION_BITS", "12")]).status.code(), Some(2));
    std::fs::write(&cfg, "precision_bits: 64\n").unwrap();
    assert_eq!(dynprop(&base).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn tower_p2_bound_and_inertia() {
    let (code, v) = json(&["tower", "p2-bound", "--primes", "2,3,5", "--poly", "x^2-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["bound"], 240);
    assert_eq!(v["result"]["certificate"]["inertia"], json!([1, 2]));
    let (_, v) = json(&["tower", "inertia", "--primes", "2,3,5", "--index", "2"]);
    assert_eq!(v["result"]["min_degree"], 2);
    assert_eq!(v["result"]["frozen_through_level"], 3);
}

#[test]
fn groups() {
    let (_, v) = json(&["group", "normals", "--group", "S4"]);
    assert_eq!(v["result"]["count"], 4);
    let (_, v) = json(&["group", "normals", "--gen", "(1 2)", "--gen", "(1 2 3 4 5)"]);
    assert_eq!(v["result"]["order"], 120);
    assert_eq!(v["result"]["count"], 3);
    let (_, v) = json(&["group", "exponent", "--group", "S4"]);
    assert_eq!(v["result"]["exponent"], 12);
    let (_, v) = json(&["group", "goursat", "--factors", "5,5"]);
    assert_eq!(v["result"]["normal_subgroups"].as_array().unwrap().len(), 4);
}

#[test]
fn powermap_and_chebyshev() {
    let (_, v) = json(&["powermap", "--d", "2", "--n", "5", "--k", "2"]);
    assert_eq!(v["result"]["galois"]["order_of_d"], 5);
    assert_eq!(v["result"]["orbit_action"]["stabilizes_all"], true);
    let (_, v) = json(&["chebyshev", "--d", "4"]);
    assert_eq!(v["result"]["polynomial"], "x^4 - 4x^2 + 2");
    assert_eq!(v["result"]["identity_holds"], true);
}

#[test]
fn preimage_tree_terminates() {
    let (code, v) = json(&["preimage-tree", "--poly", "x^2", "--root", "16", "--depth", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["level_counts"], json!([1, 2, 2]));
    assert_eq!(v["result"]["termination_depth"], 3);
    assert_eq!(v["result"]["verified"], true);
}
