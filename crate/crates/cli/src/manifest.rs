//! Run manifests: what was run, on which inputs, producing which outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    /// Input path to SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    /// Output name (a path, or `stdout`) to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
    pub wall_time_ms: u128,
}

/// Collects manifest data while a subcommand runs.
pub struct Recorder {
    started: Instant,
    manifest: RunManifest,
    first_file: Option<PathBuf>,
}

impl Recorder {
    pub fn new(command: &str) -> Self {
        Recorder {
            started: Instant::now(),
            manifest: RunManifest {
                command: command.to_string(),
                parameters: BTreeMap::new(),
                seed: None,
                inputs: BTreeMap::new(),
                outputs: BTreeMap::new(),
                wall_time_ms: 0,
            },
            first_file: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.manifest.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        self.manifest
            .inputs
            .insert(path.display().to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    /// Writes an output file and records its digest.
    pub fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        std::fs::write(path, contents)
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.manifest
            .outputs
            .insert(path.display().to_string(), sha256_hex(contents.as_bytes()));
        self.first_file.get_or_insert_with(|| path.to_path_buf());
        Ok(())
    }

    pub fn stdout(&mut self, contents: &str) {
        self.manifest
            .outputs
            .insert("stdout".to_string(), sha256_hex(contents.as_bytes()));
    }

    /// Writes the manifest to `explicit`, or next to the first output file
    /// as `<file>.manifest.json`. Runs that only print write none unless
    /// asked.
    pub fn finish(mut self, explicit: Option<&Path>) -> Result<Option<RunManifest>> {
        self.manifest.wall_time_ms = self.started.elapsed().as_millis();
        let target = match (explicit, &self.first_file) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(f)) => {
                let mut name = f.as_os_str().to_owned();
                name.push(".manifest.json");
                PathBuf::from(name)
            }
            (None, None) => return Ok(None),
        };
        let json = serde_json::to_string_pretty(&self.manifest)?;
        std::fs::write(&target, json + "\n")
            .with_context(|| format!("cannot write {}", target.display()))?;
        Ok(Some(self.manifest))
    }
}
