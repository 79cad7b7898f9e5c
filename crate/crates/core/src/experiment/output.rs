use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{GmoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = GmoError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(GmoError::Config(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// Sidecar written next to every output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub file: String,
    pub seed: Option<u64>,
    pub config_hash: String,
    pub version: String,
}

/// SHA-256 of the JSON serialization of `config`, hex encoded.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Writes tables, summaries and plots into one directory.
#[derive(Debug, Clone)]
pub struct OutputSink {
    dir: PathBuf,
    seed: Option<u64>,
    config_hash: String,
    format: OutputFormat,
    written: Vec<PathBuf>,
}

impl OutputSink {
    pub fn new(dir: impl Into<PathBuf>, seed: Option<u64>, config_hash: String, format: OutputFormat) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| GmoError::Config(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir, seed, config_hash, format, written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn finish(&mut self, name: &str, body: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| GmoError::Config(format!("cannot write {}: {e}", path.display())))?;
        let meta = Metadata {
            file: name.to_string(),
            seed: self.seed,
            config_hash: self.config_hash.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let meta_path = self.dir.join(format!("{name}.meta.json"));
        fs::write(&meta_path, serde_json::to_vec_pretty(&meta)?)?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Writes `rows` as `<stem>.csv` or `<stem>.json` depending on the format.
    pub fn write_table<R: Serialize>(&mut self, stem: &str, rows: &[R]) -> Result<PathBuf> {
        match self.format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r)?;
                }
                let body = w.into_inner().map_err(|e| GmoError::Config(e.to_string()))?;
                self.finish(&format!("{stem}.csv"), &body)
            }
            OutputFormat::Json => self.write_json(stem, &rows),
        }
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, stem: &str, value: &T) -> Result<PathBuf> {
        let body = serde_json::to_vec_pretty(value)?;
        self.finish(&format!("{stem}.json"), &body)
    }

    pub fn write_svg(&mut self, stem: &str, svg: &str) -> Result<PathBuf> {
        self.finish(&format!("{stem}.svg"), svg.as_bytes())
    }
}
