#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub fn dynprop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynprop"))
        .args(args)
        .env_remove("DYNPROP_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

pub fn dynprop_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dynprop"));
    cmd.args(args).env_remove("DYNPROP_PRECISION_BITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Runs with `--json` and parses stdout.
pub fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = dynprop(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: stdout is not json ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap_or(-1), v)
}
