use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use sha2::{Digest, Sha256};
use vosground::io::write_files;

pub mod eval;
pub mod jitter;
pub mod oracle;
pub mod rerank;
pub mod simulate;
pub mod stats;

/// Invalid flag combination or unusable path; maps to exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Fails with a usage error unless every given path exists.
pub fn require_paths<'a>(paths: impl IntoIterator<Item = &'a Path>) -> anyhow::Result<()> {
    for p in paths {
        if !p.exists() {
            return Err(usage(format!("{}: no such file or directory", p.display())));
        }
    }
    Ok(())
}

pub fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn warn_all(source: &Path, warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {}: {w}", source.display());
    }
}

/// Output files collected in memory and written only once the whole command
/// has succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, rel: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((rel.into(), contents.into()));
    }

    /// `sha256  path` lines in path order.
    pub fn manifest(&self) -> String {
        let mut rows: Vec<(String, String)> = self
            .files
            .iter()
            .map(|(p, c)| (slash_path(p), hex(&Sha256::digest(c))))
            .collect();
        rows.sort();
        rows.iter().map(|(p, d)| format!("{d}  {p}\n")).collect()
    }

    pub fn commit(&self, root: &Path) -> anyhow::Result<()> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        write_files(root, &self.files).with_context(|| format!("writing below {}", root.display()))
    }
}

fn slash_path(p: &Path) -> String {
    p.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Stable 64-bit id of a string, used to derive per-key random streams.
pub fn stable_id(s: &str) -> u64 {
    let d = Sha256::digest(s.as_bytes());
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}
