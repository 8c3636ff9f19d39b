use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use haar_walk::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const DEGENERATE: u8 = 2;
    pub const MALFORMED: u8 = 64;
    pub const BUDGET: u8 = 65;
    pub const MISSING: u8 = 66;
    pub const IO: u8 = 74;
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Budget { .. } => exit::BUDGET,
        Error::Io(e) if e.kind() == std::io::ErrorKind::NotFound => exit::MISSING,
        Error::Io(_) => exit::IO,
        Error::Divergent(_) | Error::Truncation { .. } | Error::Parseval { .. } | Error::Degenerate(_) | Error::Insufficient(_) => {
            exit::FAIL
        }
        _ => exit::MALFORMED,
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// Provenance of one command run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub kind: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    /// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
    pub timestamp: u64,
    pub config_paths: Vec<String>,
    pub input_digests: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
    pub output_digests: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        RunManifest {
            kind: "manifest",
            tool_version: TOOL_VERSION,
            command: command.into(),
            seed,
            timestamp,
            config_paths: Vec::new(),
            input_digests: BTreeMap::new(),
            output_paths: Vec::new(),
            output_digests: BTreeMap::new(),
        }
    }

    /// Records an input file; inline specs that are not files are skipped.
    pub fn input(&mut self, path: &Path) -> Result<()> {
        if path.is_file() {
            self.input_digests.insert(path.display().to_string(), sha256_file(path)?);
        }
        Ok(())
    }

    pub fn config(&mut self, path: &Path) -> Result<()> {
        self.config_paths.push(path.display().to_string());
        self.input(path)
    }

    pub fn output(&mut self, path: &Path) -> Result<()> {
        self.output_paths.push(path.display().to_string());
        self.output_digests.insert(path.display().to_string(), sha256_file(path)?);
        Ok(())
    }

    pub fn write(&self, out_dir: &Path, name: &str) -> Result<PathBuf> {
        write_json(&out_dir.join(format!("manifest-{name}.json")), self)
    }
}

pub fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf> {
    ensure_parent(path)?;
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf> {
    ensure_parent(path)?;
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}
