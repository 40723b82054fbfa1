//! CSV and manifest writers.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;

/// Output directory that remembers every file written into it.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self { root, written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Writes a header and rows of already formatted cells.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(header).with_context(|| format!("writing {}", path.display()))?;
        for row in rows {
            w.write_record(&row).with_context(|| format!("writing {}", path.display()))?;
        }
        w.flush().with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.into());
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.path(name);
        let text = serde_json::to_string_pretty(value)?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.into());
        Ok(())
    }

    /// One JSON document per line.
    pub fn jsonl<T: Serialize>(&mut self, name: &str, values: &[T]) -> Result<()> {
        let path = self.path(name);
        let mut text = String::new();
        for v in values {
            text.push_str(&serde_json::to_string(v)?);
            text.push('\n');
        }
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.into());
        Ok(())
    }

    /// Writes `<command>_manifest.json` listing the files written so far.
    pub fn manifest(&mut self, command: &str, config: &ExperimentConfig, results: Value) -> Result<PathBuf> {
        let manifest = Manifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: config.clone(),
            outputs: self.written.clone(),
            results,
        };
        let name = format!("{}_manifest.json", command.replace('-', "_"));
        self.json(&name, &manifest)?;
        Ok(self.path(&name))
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    /// Fully resolved configuration; rerunning with it reproduces the outputs.
    pub config: ExperimentConfig,
    pub outputs: Vec<String>,
    pub results: Value,
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
