use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Human lines and structured verdicts of one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckLine>,
    pub output: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            output: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.output.push(s.into());
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        let name = name.into();
        let text = match (&witness, passed) {
            (_, true) => format!("{name}: pass"),
            (Some(w), false) => format!("{name}: FAIL, {w}"),
            (None, false) => format!("{name}: FAIL"),
        };
        self.output.push(text);
        self.checks.push(CheckLine { name, passed, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Report(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::Report(format!("{}: {e}", path.display())))
    }
}
