//! Run configuration: defaults, then an optional `key = value` file, then
//! the `DYNPROP_PRECISION_BITS` environment variable, then flags.

use std::path::Path;

use dynprop::Limits;
use thiserror::Error;

pub const PRECISION_ENV: &str = "DYNPROP_PRECISION_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Human,
    Json,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Unreadable { path: String, reason: String },
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{key} = {value}: {message}")]
    Invalid { key: String, value: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub poly_degree_cap: usize,
    pub tree_node_cap: usize,
    pub group_order_cap: usize,
    pub output: OutputMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        let l = Limits::default();
        RunConfig {
            precision_bits: 128,
            poly_degree_cap: l.poly_degree_cap,
            tree_node_cap: l.tree_node_cap,
            group_order_cap: l.group_order_cap,
            output: OutputMode::Human,
        }
    }
}

fn positive(key: &str, value: &str) -> Result<usize, ConfigError> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(ConfigError::Invalid {
            key: key.into(),
            value: value.into(),
            message: "expected a positive integer".into(),
        }),
    }
}

impl RunConfig {
    /// Applies one setting; shared by the file, the environment and flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "precision_bits" => {
                let bits = positive(key, value)?;
                if !(53..=1 << 20).contains(&bits) {
                    return Err(ConfigError::Invalid {
                        key: key.into(),
                        value: value.into(),
                        message: "precision must be between 53 and 1048576 bits".into(),
                    });
                }
                self.precision_bits = bits as u32;
            }
            "poly_degree_cap" => self.poly_degree_cap = positive(key, value)?,
            "tree_node_cap" => self.tree_node_cap = positive(key, value)?,
            "group_order_cap" => self.group_order_cap = positive(key, value)?,
            "output" => {
                self.output = match value {
                    "human" => OutputMode::Human,
                    "json" => OutputMode::Json,
                    _ => {
                        return Err(ConfigError::Invalid {
                            key: key.into(),
                            value: value.into(),
                            message: "expected human or json".into(),
                        })
                    }
                }
            }
            _ => {
                return Err(ConfigError::Invalid {
                    key: key.into(),
                    value: value.into(),
                    message: "unknown setting".into(),
                })
            }
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { line: i + 1, message: format!("expected key = value, got '{line}'") });
            };
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        self.apply_text(&text)
    }

    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(PRECISION_ENV) {
            self.set("precision_bits", v.trim())?;
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            poly_degree_cap: self.poly_degree_cap,
            tree_node_cap: self.tree_node_cap,
            group_order_cap: self.group_order_cap,
            ..Limits::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_syntax() {
        let mut c = RunConfig::default();
        c.apply_text("# caps\nprecision_bits = 256\n\ngroup_order_cap=5000  # small\noutput = json\n").unwrap();
        assert_eq!((c.precision_bits, c.group_order_cap, c.output), (256, 5000, OutputMode::Json));
    }

    #[test]
    fn rejects_bad_settings() {
        let mut c = RunConfig::default();
        assert!(c.set("precision_bits", "52").is_err());
        assert!(c.set("tree_node_cap", "0").is_err());
        assert!(c.set("colour", "red").is_err());
        assert!(c.set("output", "xml").is_err());
        assert!(matches!(c.apply_text("precision_bits 64"), Err(ConfigError::Syntax { line: 1, .. })));
        assert_eq!(c, RunConfig::default());
    }
}
