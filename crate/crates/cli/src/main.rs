mod commands;
mod config;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use commands::Command;
use config::{ConfigError, OutputMode, RunConfig};

pub const SCHEMA_TAG: &str = "dynprop/v1";

/// Exact rational dynamics, radical towers and small permutation groups.
///
/// Exit status: 0 success, 2 invalid input, 3 a resource cap was hit,
/// 1 internal consistency failure.
#[derive(Debug, Parser)]
#[command(name = "dynprop", version)]
struct Cli {
    /// File of `key = value` settings, overridden by the environment and flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Bits of precision for decimal enclosures (env DYNPROP_PRECISION_BITS)
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[arg(long, global = true)]
    poly_degree_cap: Option<usize>,
    #[arg(long, global = true)]
    tree_node_cap: Option<usize>,
    #[arg(long, global = true)]
    group_order_cap: Option<usize>,
    /// human or json
    #[arg(long, global = true)]
    output: Option<String>,
    /// Same as --output json
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

impl Cli {
    fn config(&self) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        cfg.apply_env()?;
        let flags = [
            ("precision_bits", self.precision_bits.map(|v| v.to_string())),
            ("poly_degree_cap", self.poly_degree_cap.map(|v| v.to_string())),
            ("tree_node_cap", self.tree_node_cap.map(|v| v.to_string())),
            ("group_order_cap", self.group_order_cap.map(|v| v.to_string())),
            ("output", self.output.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if self.json {
            cfg.output = OutputMode::Json;
        }
        Ok(cfg)
    }
}

fn error_kind(e: &dynprop::Error) -> (&'static str, u8) {
    use dynprop::Error::*;
    match e {
        Parse { .. } => ("parse", 2),
        Contract(_) => ("contract", 2),
        Resource { .. } | IncompleteFactorization { .. } => ("resource", 3),
        Internal(_) => ("internal", 1),
    }
}

fn emit(mode: OutputMode, envelope: &Value) {
    let text = match mode {
        OutputMode::Json => serde_json::to_string_pretty(envelope).expect("json values serialize"),
        OutputMode::Human => render::human(envelope),
    };
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = writeln!(out, "{}", text.trim_end());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli.command, &cfg) {
        Ok(r) => {
            let envelope = json!({"schema": SCHEMA_TAG, "command": r.command, "input": r.input, "result": r.result});
            emit(cfg.output, &envelope);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            eprintln!("error: {e}");
            if cfg.output == OutputMode::Json {
                let envelope = json!({"schema": SCHEMA_TAG, "error": {"kind": kind, "message": e.to_string()}});
                emit(cfg.output, &envelope);
            }
            ExitCode::from(code)
        }
    }
}
