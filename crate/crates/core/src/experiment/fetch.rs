use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{GmoError, Result};

pub const JUDGES_URL: &str = "https://grodri.github.io/datasets/justices.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dataset {
    Judges,
    Uefa,
}

impl Dataset {
    pub fn file_name(self) -> &'static str {
        match self {
            Dataset::Judges => "justices.csv",
            Dataset::Uefa => "uefa.csv",
        }
    }
}

impl FromStr for Dataset {
    type Err = GmoError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "judges" | "justices" => Ok(Dataset::Judges),
            "uefa" => Ok(Dataset::Uefa),
            _ => Err(GmoError::Config(format!("unknown dataset `{s}` (expected judges or uefa)"))),
        }
    }
}

/// Downloads `dataset` into `dir` and returns the written path.
pub fn fetch_data(dataset: Dataset, dir: &Path) -> Result<PathBuf> {
    let url = match dataset {
        Dataset::Judges => JUDGES_URL,
        Dataset::Uefa => {
            return Err(GmoError::Config(
                "the UEFA table has no download location; transcribe it into a two-column CSV \
                 (first-kick-goal minute, first-home-goal minute) at data/uefa.csv"
                    .into(),
            ))
        }
    };
    let mut resp = ureq::get(url).call().map_err(|e| GmoError::data(format!("GET {url} failed: {e}")))?;
    let body = resp
        .body_mut()
        .read_to_vec()
        .map_err(|e| GmoError::data(format!("reading {url} failed: {e}")))?;
    fs::create_dir_all(dir)?;
    let path = dir.join(dataset.file_name());
    fs::write(&path, body)?;
    Ok(path)
}
