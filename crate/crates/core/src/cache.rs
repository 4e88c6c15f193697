//! On-disk cache of emitted payloads, keyed by command, genus, variant and
//! engine version.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "MUMFORD_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub command: String,
    pub genus: u32,
    pub variant: String,
    pub engine_version: String,
}

impl CacheKey {
    pub fn new(command: &str, genus: u32, variant: impl Into<String>) -> Self {
        CacheKey { command: command.into(), genus, variant: variant.into(), engine_version: ENGINE_VERSION.into() }
    }

    fn file_name(&self) -> String {
        let id = serde_json::to_string(self).expect("key serializes");
        let digest = hex::encode(Sha256::digest(id.as_bytes()));
        format!("{}-g{}-{}.json", self.command, self.genus, &digest[..16])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub payload: String,
    /// Hex sha256 of `payload`.
    pub checksum: String,
}

pub fn checksum(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The flag wins over the environment; neither means no cache.
    pub fn locate(flag: Option<&Path>) -> Option<Cache> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// `Ok(None)` on a miss. A present entry with a bad checksum or a
    /// different key is an error.
    pub fn get(&self, key: &CacheKey) -> Result<Option<String>> {
        let text = match fs::read_to_string(self.path(key)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: CacheEntry = serde_json::from_str(&text)?;
        if &entry.key != key {
            return Err(Error::Cache(format!("key collision at {}", self.path(key).display())));
        }
        if checksum(&entry.payload) != entry.checksum {
            return Err(Error::Cache(format!("checksum mismatch in {}", self.path(key).display())));
        }
        Ok(Some(entry.payload))
    }

    /// Write through a temporary file in the same directory, then rename.
    pub fn put(&self, key: &CacheKey, payload: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry { key: key.clone(), payload: payload.into(), checksum: checksum(payload) };
        let path = self.path(key);
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{}.{}.{n}.tmp", key.file_name(), std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
