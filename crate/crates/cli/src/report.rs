//! Uniform run reports with content digests.
//!
//! Every subcommand emits the same envelope: tool version, the subcommand
//! and its parameters, a SHA-256 digest of each input file, the results,
//! and a digest over all of that. Timing is reported but excluded from the
//! digest, so two runs of the same computation — at any thread count —
//! produce the same digest.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub params: Value,
    pub inputs: Vec<InputDigest>,
    pub results: Value,
    /// SHA-256 over version, command, params, input digests, and results.
    pub digest: String,
    pub timing_ms: f64,
}

pub struct ReportBuilder {
    command: &'static str,
    params: Value,
    inputs: Vec<InputDigest>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(command: &'static str, params: Value) -> Self {
        Self { command, params, inputs: Vec::new(), start: Instant::now() }
    }

    /// Registers an input file by hashing its raw bytes.
    pub fn add_input(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn finish(self, results: Value) -> Report {
        // serde_json maps are sorted by key, so this serialization is
        // canonical for the digest.
        let canonical = json!({
            "command": self.command,
            "inputs": self.inputs
                .iter()
                .map(|i| json!({ "path": i.path, "sha256": i.sha256 }))
                .collect::<Vec<_>>(),
            "params": self.params,
            "results": results,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let digest =
            sha256_hex(serde_json::to_string(&canonical).expect("plain data").as_bytes());
        Report {
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            params: self.params,
            inputs: self.inputs,
            results,
            digest,
            timing_ms: self.start.elapsed().as_secs_f64() * 1e3,
        }
    }
}
