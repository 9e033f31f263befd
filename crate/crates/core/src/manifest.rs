//! Per-run manifest: what was run, on which inputs, and what came out.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub tool_version: String,
    /// Effective configuration, whatever its shape for the command.
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, args: Vec<String>) -> Self {
        Self {
            command: command.into(),
            args,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            config: serde_json::Value::Null,
            inputs: Vec::new(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn with_config<T: Serialize>(mut self, config: &T) -> Self {
        self.config = serde_json::to_value(config).unwrap_or(serde_json::Value::Null);
        self
    }

    pub fn add_input(&mut self, path: &Path) -> io::Result<()> {
        self.inputs.push(InputDigest {
            path: path.to_owned(),
            sha256: file_sha256(path)?,
        });
        Ok(())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        log::warn!("{message}");
        self.warnings.push(message);
    }

    /// Writes `<out>/manifest/manifest.json` and returns its path.
    pub fn write(&self, out: &Path) -> io::Result<PathBuf> {
        let dir = out.join("manifest");
        std::fs::create_dir_all(&dir)?;
        let path = dir.join("manifest.json");
        let mut f = File::create(&path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        Ok(path)
    }
}

pub fn file_sha256(path: &Path) -> io::Result<String> {
    let mut hasher = Sha256::new();
    let mut reader = BufReader::new(File::open(path)?);
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = reader.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}
