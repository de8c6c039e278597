//! Output directory bookkeeping. Every file goes through [`Output::write`];
//! the manifest is written by [`Output::finish`] and only then.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    seed: u64,
    files: &'a [FileEntry],
}

pub struct Output {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Output {
    /// Creates `dir` and removes a manifest left by an earlier run, so an
    /// interrupted run never looks complete.
    pub fn create(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        match fs::remove_file(dir.join(MANIFEST)) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.dir.join(name), bytes)?;
        let digest = Sha256::digest(bytes);
        let entry = FileEntry {
            path: name.to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            bytes: bytes.len(),
        };
        match self.files.iter_mut().find(|f| f.path == name) {
            Some(f) => *f = entry,
            None => self.files.push(entry),
        }
        Ok(())
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    pub fn finish(self, command: &str, seed: u64) -> io::Result<PathBuf> {
        let m = Manifest {
            command,
            seed,
            files: &self.files,
        };
        let mut text = serde_json::to_string_pretty(&m).map_err(io::Error::other)?;
        text.push('\n');
        let path = self.dir.join(MANIFEST);
        fs::write(&path, text)?;
        Ok(path)
    }
}
