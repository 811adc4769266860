//! Result documents written by every command.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1.0";

/// The JSON schema every document validates against.
pub const SCHEMA: &str = include_str!("../schemas/result-document.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub parameters: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance of the ODE integrator.
    pub integrator: f64,
    /// Newton stops when `|Δλ| <= newton_step · (1 + |λ|)`.
    pub newton_step: f64,
    /// Largest accepted relative determinant residual.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub software: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub command: CommandEcho,
    pub status: Status,
    pub payload: Value,
    pub provenance: Provenance,
}

/// Path of the first `null` inside `value`; serde writes non-finite floats as `null`.
pub fn find_null(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some(String::new()),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, v)| find_null(v).map(|p| format!("[{i}]{p}"))),
        Value::Object(map) => map.iter().find_map(|(k, v)| find_null(v).map(|p| format!(".{k}{p}"))),
        _ => None,
    }
}

impl ResultDocument {
    pub fn new(command: CommandEcho, status: Status, payload: Value, tolerances: Tolerances, seed: u64) -> Result<Self, CliError> {
        if let Some(at) = find_null(&payload) {
            return Err(CliError::Compute(format!("payload field payload{at} is not a finite number")));
        }
        Ok(Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command,
            status,
            payload,
            provenance: Provenance {
                tolerances,
                seed,
                software: format!("quartic {}", env!("CARGO_PKG_VERSION")),
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            },
        })
    }

    /// Writes `<dir>/<command>.json`, creating the directory if needed.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let file = dir.join(format!("{}.json", self.command.name));
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&file, text + "\n").map_err(|e| CliError::Io(format!("cannot write {}: {e}", file.display())))?;
        Ok(file)
    }
}
