//! Output files and the manifest printed on stdout.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
    /// Figure the file backs, if any.
    pub figure: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub operation: &'static str,
    pub model: String,
    pub seed: Option<u64>,
    pub output_dir: PathBuf,
    pub artifacts: Vec<Artifact>,
}

/// Collects files written into one output directory.
pub struct OutputDir {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
        Ok(Self { dir: dir.to_path_buf(), artifacts: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8], figure: Option<&'static str>) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|source| CliError::Output { path, source })?;
        self.artifacts.push(Artifact {
            path: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len(),
            figure,
        });
        Ok(())
    }

    /// Writes through a CSV-producing closure.
    pub fn write_with(
        &mut self,
        name: &str,
        figure: Option<&'static str>,
        f: impl FnOnce(&mut Vec<u8>) -> metaunravel::Result<()>,
    ) -> Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(name, &buf, figure)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_vec_pretty(value).map_err(metaunravel::Error::from)?;
        text.push(b'\n');
        self.write(name, &text, None)
    }

    pub fn write_rows<T: Serialize>(&mut self, name: &str, figure: Option<&'static str>, rows: &[T]) -> Result<()> {
        self.write_with(name, figure, |buf| {
            let mut w = csv::Writer::from_writer(buf);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        })
    }

    pub fn into_artifacts(self) -> Vec<Artifact> {
        self.artifacts
    }
}
