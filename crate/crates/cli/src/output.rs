//! Output directory bookkeeping and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Files written so far; [`OutputDir::discard`] removes them again.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    created_root: bool,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        let created_root = !root.exists();
        fs::create_dir_all(root).map_err(|source| CliError::Write {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            created_root,
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Write { path, source })?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Removes every file written by this run, and the directory itself if
    /// the run created it.
    pub fn discard(self) {
        for f in &self.files {
            let _ = fs::remove_file(self.root.join(f));
        }
        if self.created_root {
            let _ = fs::remove_dir(&self.root);
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

pub fn unix_seconds() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub config_hash: String,
    pub description: String,
    pub output_dir: PathBuf,
    pub files: Vec<String>,
    pub started: f64,
    pub finished: f64,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tool: mhd1d {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(p) = &self.config_path {
            let _ = writeln!(out, "config: {}", p.display());
        }
        let _ = writeln!(out, "config_sha256: {}", self.config_hash);
        let _ = writeln!(out, "description: {}", self.description);
        let _ = writeln!(out, "output_dir: {}", self.output_dir.display());
        let _ = writeln!(out, "started_unix: {:.3}", self.started);
        let _ = writeln!(out, "finished_unix: {:.3}", self.finished);
        out.push_str("files:\n");
        for f in &self.files {
            let _ = writeln!(out, "  {f}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn discard_removes_created_directory() {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().join("run");
        let mut out = OutputDir::create(&root).unwrap();
        out.write("a.csv", "x\n").unwrap();
        assert!(root.join("a.csv").exists());
        out.discard();
        assert!(!root.exists());
    }

    #[test]
    fn discard_keeps_foreign_files() {
        let tmp = tempfile::tempdir().unwrap();
        fs::write(tmp.path().join("keep.txt"), "k").unwrap();
        let mut out = OutputDir::create(tmp.path()).unwrap();
        out.write("a.csv", "x\n").unwrap();
        out.discard();
        assert!(tmp.path().join("keep.txt").exists());
        assert!(!tmp.path().join("a.csv").exists());
    }
}
