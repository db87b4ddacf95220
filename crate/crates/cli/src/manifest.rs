//! Run manifests written next to every output file.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
pub struct Output {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub graph: Value,
    pub graph_sha256: String,
    pub budgets: Value,
    pub tolerances: Value,
    pub status: String,
    pub wall_time_s: f64,
    pub outputs: Vec<Output>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub summary: Value,
    #[serde(skip)]
    started: Option<Instant>,
}

impl Manifest {
    pub fn start(command: &[String], graph_json: &str) -> Self {
        Self {
            tool: "limitroots",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_vec(),
            graph: serde_json::from_str(graph_json).unwrap_or(Value::Null),
            graph_sha256: sha256_hex(graph_json.as_bytes()),
            budgets: Value::Null,
            tolerances: Value::Null,
            status: "running".into(),
            wall_time_s: 0.0,
            outputs: Vec::new(),
            summary: Value::Null,
            started: Some(Instant::now()),
        }
    }

    /// Writes `bytes` to `path` and records its digest.
    pub fn write_output(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(Output {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes the manifest as `<first output>.manifest.json` (or next to
    /// `anchor` when nothing was written).
    pub fn finish(mut self, anchor: &Path, status: &str) -> Result<PathBuf> {
        self.status = status.to_string();
        self.wall_time_s = self.started.map_or(0.0, |t| t.elapsed().as_secs_f64());
        let path = sidecar(anchor);
        let text = serde_json::to_string_pretty(&self)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
