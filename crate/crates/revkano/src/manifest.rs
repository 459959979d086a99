//! `manifest.json`: per-stage parameters plus SHA-256 digests of every input
//! and artifact. Holds no timestamps or absolute output paths, so identical
//! runs produce identical manifests.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub params: serde_json::Value,
    /// Input label to `{path, sha256}`.
    pub inputs: BTreeMap<String, InputDigest>,
    /// Artifact file name (relative to the output dir) to SHA-256.
    pub artifacts: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub stages: BTreeMap<String, StageRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn digest_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

impl Manifest {
    pub fn load_or_new(out_dir: &Path) -> Result<Self> {
        let path = out_dir.join(MANIFEST);
        if path.exists() {
            io::read_json(&path)
        } else {
            Ok(Manifest {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                stages: BTreeMap::new(),
            })
        }
    }

    /// Replaces the record of `stage` and rewrites the manifest.
    pub fn record(out_dir: &Path, stage: &str, record: StageRecord) -> Result<()> {
        let mut m = Self::load_or_new(out_dir)?;
        m.stages.insert(stage.to_string(), record);
        io::write_json(&out_dir.join(MANIFEST), &m)
    }
}

impl StageRecord {
    pub fn new(params: impl Serialize) -> Self {
        StageRecord {
            params: serde_json::to_value(params).expect("serializable params"),
            ..Self::default()
        }
    }

    pub fn input(&mut self, label: &str, path: &Path) -> Result<()> {
        self.inputs.insert(
            label.to_string(),
            InputDigest {
                path: path.display().to_string(),
                sha256: digest_file(path)?,
            },
        );
        Ok(())
    }

    pub fn artifact(&mut self, out_dir: &Path, name: &str) -> Result<()> {
        self.artifacts
            .insert(name.to_string(), digest_file(&out_dir.join(name))?);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
