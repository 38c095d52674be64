use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::params::InputFile;

/// Record of one invocation: enough to rerun it and check its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub argv: Vec<String>,
    pub parameters: Value,
    pub inputs: Vec<InputFile>,
    pub outputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(
        command: &'static str,
        parameters: Value,
        inputs: Vec<InputFile>,
        seed: Option<u64>,
    ) -> Self {
        RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            argv: std::env::args().collect(),
            parameters,
            inputs,
            outputs: Vec::new(),
            seed,
            duration_seconds: 0.0,
        }
    }

    pub fn finish(mut self, outputs: Vec<PathBuf>, elapsed: Duration) -> Self {
        self.outputs = outputs;
        self.duration_seconds = elapsed.as_secs_f64();
        self
    }

    /// Writes to `explicit` if given, else `<default_next_to>.manifest.json`,
    /// else standard error.
    pub fn emit(&self, explicit: Option<&Path>, default_next_to: Option<&Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        let target = explicit
            .map(Path::to_path_buf)
            .or_else(|| default_next_to.map(manifest_path));
        match target {
            Some(path) => fs::write(&path, text + "\n")
                .with_context(|| format!("writing manifest {}", path.display())),
            None => {
                let mut err = std::io::stderr().lock();
                writeln!(err, "{text}")?;
                Ok(())
            }
        }
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
