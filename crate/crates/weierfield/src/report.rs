//! Report emission: config-hashed CSV/JSON files plus the run manifest.
//!
//! Every data file starts with (or contains) the config hash, JSON keys are
//! emitted in sorted order, and floats use shortest round-trip formatting, so
//! reruns with the same config and seed are byte-identical at any thread
//! count.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Truncated hex SHA-256 of the canonical config (location fields removed).
pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    let canonical = cfg.canonical_for_hash()?.to_string();
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(hex::encode(&digest[..8]))
}

/// Collects output files for one command run and finishes with a manifest.
pub struct OutputWriter {
    dir: PathBuf,
    hash: String,
    files: Vec<String>,
    timings_ms: Vec<(String, u128)>,
    started: Instant,
}

impl OutputWriter {
    pub fn new(dir: &Path, hash: String) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            hash,
            files: Vec::new(),
            timings_ms: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes a JSON report with the config hash injected at the top level,
    /// keys sorted, pretty-printed.
    pub fn write_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut v = serde_json::to_value(value)?;
        match v.as_object_mut() {
            Some(map) => {
                map.insert(
                    "config_hash".to_string(),
                    serde_json::Value::String(self.hash.clone()),
                );
            }
            None => {
                return Err(Error::invalid(format!(
                    "JSON report {name} must serialize to an object"
                )))
            }
        }
        let text = serde_json::to_string_pretty(&v)?;
        let path = self.path(name);
        let mut f = File::create(&path)?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Opens a CSV file whose first line carries the config hash, then the
    /// mandatory header row.
    pub fn csv_writer(&mut self, name: &str, header: &[&str]) -> Result<csv::Writer<File>> {
        let path = self.path(name);
        let mut f = File::create(&path)?;
        writeln!(f, "# config_hash={}", self.hash)?;
        let mut w = csv::Writer::from_writer(f);
        w.write_record(header)
            .map_err(|e| Error::numeric(format!("csv write failed: {e}")))?;
        self.files.push(name.to_string());
        Ok(w)
    }

    pub fn record_timing(&mut self, label: &str) {
        self.timings_ms
            .push((label.to_string(), self.started.elapsed().as_millis()));
    }

    /// Writes run_manifest.json listing every emitted file. Wall-clock
    /// timings live only here, keeping the data files reproducible.
    pub fn finish(mut self, command: &str) -> Result<()> {
        self.record_timing("total");
        let manifest = serde_json::json!({
            "config_hash": self.hash,
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "outputs": self.files,
            "timings_ms": self.timings_ms
                .iter()
                .map(|(k, v)| serde_json::json!({"label": k, "ms": v}))
                .collect::<Vec<_>>(),
        });
        let text = serde_json::to_string_pretty(&manifest)?;
        let mut f = File::create(self.dir.join("run_manifest.json"))?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
        Ok(())
    }
}
