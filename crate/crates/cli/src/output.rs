//! Output plumbing: run manifests and deterministic file writing.

use serde::Serialize;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use bridgewobble_core::spectrum::charts::fmt_f64;

/// Record of one CLI invocation; written next to the outputs. Re-running
/// the same subcommand with the same parameters reproduces the data files
/// byte for byte (the manifest's wall clock is the only varying field).
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub wall_clock_ms: u128,
}

pub struct OutDir {
    dir: PathBuf,
    outputs: Vec<String>,
    started: Instant,
    subcommand: String,
    parameters: serde_json::Value,
}

impl OutDir {
    pub fn new(dir: &Path, subcommand: &str, parameters: serde_json::Value) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
            started: Instant::now(),
            subcommand: subcommand.to_string(),
            parameters,
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<PathBuf> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path)?;
        f.write_all(contents.as_bytes())?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<PathBuf> {
        let body = serde_json::to_string_pretty(value).expect("serializable report");
        self.write(name, &(body + "\n"))
    }

    /// Write the manifest and return the list of produced files.
    pub fn finish(mut self) -> std::io::Result<Vec<String>> {
        let manifest = RunManifest {
            subcommand: self.subcommand.clone(),
            parameters: self.parameters.clone(),
            outputs: self.outputs.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_ms: self.started.elapsed().as_millis(),
        };
        let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let path = self.dir.join("manifest.json");
        fs::write(path, body + "\n")?;
        self.outputs.push("manifest.json".into());
        Ok(self.outputs)
    }
}
