//! Atomic file output and run manifests.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Failure::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

/// Renders into memory with `f`, then writes atomically.
pub fn emit<F>(path: &Path, f: F) -> Result<String, Failure>
where
    F: FnOnce(&mut Vec<u8>) -> nrg_core::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    write_atomic(path, &buf)?;
    Ok(sha256_hex(&buf))
}

#[derive(Serialize)]
pub struct Versions {
    pub nrg_cli: &'static str,
    pub nrg_core: &'static str,
}

pub fn versions() -> Versions {
    Versions {
        nrg_cli: env!("CARGO_PKG_VERSION"),
        nrg_core: nrg_core::VERSION,
    }
}

/// Record of one subcommand invocation: the arguments fix every output.
#[derive(Serialize)]
pub struct CommandManifest {
    pub command: Vec<String>,
    pub arguments_sha256: String,
    pub seed: Option<u64>,
    pub versions: Versions,
    /// Output path → sha256 of its bytes.
    pub outputs: BTreeMap<String, String>,
}

impl CommandManifest {
    pub fn new(seed: Option<u64>) -> Self {
        let command: Vec<String> = std::env::args().collect();
        let arguments_sha256 = sha256_hex(command[1..].join("\0").as_bytes());
        Self {
            command,
            arguments_sha256,
            seed,
            versions: versions(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, path: &Path, digest: String) {
        self.outputs.insert(path.display().to_string(), digest);
    }

    /// Writes `<primary>.manifest.json`.
    pub fn write_next_to(&self, primary: &Path) -> Result<PathBuf, Failure> {
        let mut name = primary.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        write_atomic(&path, to_json(self)?.as_bytes())?;
        Ok(path)
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(nrg_core::Error::from)?;
    s.push('\n');
    Ok(s)
}
