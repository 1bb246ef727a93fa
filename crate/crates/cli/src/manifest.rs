//! Run manifest: a JSON record of what ran, what was produced, and how
//! long it took. Everything except the `timing` block is deterministic
//! for identical inputs.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::runner::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OutputEntry {
    pub file: String,
    pub kind: String,
    pub bytes: u64,
    pub sha256: String,
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub total_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// Preset name, or "config" for file-driven runs.
    pub mode: String,
    /// Canonical config text; re-parses to the run's `RunSpec`.
    pub config: String,
    pub method: String,
    pub jobs: usize,
    pub svg: bool,
    pub outputs: Vec<OutputEntry>,
    pub timing: Timing,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn hash_file(path: &Path) -> Result<(u64, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read back {}: {e}", path.display())))?;
    Ok((bytes.len() as u64, sha256_hex(&bytes)))
}

pub fn now_unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

pub fn emit_manifest(manifest: &Manifest, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Io(format!("cannot serialize manifest: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
