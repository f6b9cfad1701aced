use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

/// First 16 hex digits of the SHA-256 of the canonical (key-sorted) JSON form.
pub fn config_hash<T: Serialize>(config: &T) -> CliResult<String> {
    let canonical = serde_json::to_string(&serde_json::to_value(config)?)?;
    Ok(Sha256::digest(canonical.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect())
}

/// A named output file and its full contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    /// CSV with a provenance comment line ahead of the header row.
    pub fn csv(name: &str, hash: &str, seed: u64, body: &str) -> Self {
        Self { name: name.into(), contents: format!("# config_hash={hash} seed={seed}\n{body}") }
    }

    pub fn json<T: Serialize>(name: &str, value: &T) -> CliResult<Self> {
        Ok(Self { name: name.into(), contents: serde_json::to_string_pretty(value)? + "\n" })
    }
}

pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            fs::write(&path, &a.contents)?;
            Ok(path)
        })
        .collect()
}

/// Fixed-width scientific formatting so outputs are byte-stable.
pub fn sci(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}
