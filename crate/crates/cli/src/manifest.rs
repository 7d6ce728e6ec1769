//! Run manifest written next to exported data files.
//!
//! Data files themselves carry no timestamps so reruns are byte-identical;
//! the manifest is the one place timing lives.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub version: String,
    pub tolerances: BTreeMap<String, f64>,
    pub convention: Option<String>,
    pub timing_seconds: f64,
    /// File names this run produced, relative to the manifest.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: BTreeMap::new(),
            convention: None,
            timing_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter values are plain data"),
        );
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    /// Writes one named data file into `dir` and records it.
    pub fn emit(&mut self, dir: &Path, name: &str, content: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), content)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// Stamps elapsed time and writes manifest.json into `dir`.
    pub fn finish(mut self, dir: &Path, started: Instant) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        self.timing_seconds = started.elapsed().as_secs_f64();
        let body = serde_json::to_string_pretty(&self).expect("manifest is plain data");
        std::fs::write(dir.join("manifest.json"), body)
    }
}
