//! Persistent, versioned, checksummed table cache.
//!
//! One JSON file holds any number of tables, keyed by `(kind, n, r)`. The
//! payload carries a SHA-256 digest of its own exact bytes; a load rejects
//! both unknown format versions and payloads that fail the digest.

use std::collections::BTreeMap;
use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use super::{ToolkitError, CACHE_ENV_VAR};
use crate::counting::CountTable;

/// Format version this build reads and writes.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Identifies one cached table: its kind id, the largest `n` it covers,
/// and the statistic distance when refined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: String,
    pub n: u32,
    pub r: Option<u32>,
}

impl CacheKey {
    pub fn for_table(table: &CountTable) -> Self {
        CacheKey {
            kind: table.kind().id(),
            n: table.max_n().unwrap_or(0),
            r: table.iter().next().and_then(|(key, _)| key.r),
        }
    }
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} n={}", self.kind, self.n)?;
        if let Some(r) = self.r {
            write!(f, " r={r}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    table: CountTable,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    format_version: u32,
    /// Hex SHA-256 of the exact bytes of `tables`.
    checksum: String,
    tables: Box<RawValue>,
}

/// In-memory cache contents, backed by a single file on disk.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CacheFile {
    entries: BTreeMap<CacheKey, CountTable>,
}

impl CacheFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn format_version(&self) -> u32 {
        CACHE_FORMAT_VERSION
    }

    /// Stores a table under its derived key, replacing any previous value.
    pub fn insert(&mut self, table: CountTable) -> CacheKey {
        let key = CacheKey::for_table(&table);
        self.entries.insert(key.clone(), table);
        key
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CountTable> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CacheKey> {
        self.entries.keys()
    }

    pub fn save(&self, path: &Path) -> Result<(), ToolkitError> {
        let entries: Vec<CacheEntry> = self
            .entries
            .iter()
            .map(|(key, table)| CacheEntry {
                key: key.clone(),
                table: table.clone(),
            })
            .collect();
        let payload =
            serde_json::to_string(&entries).expect("cache serialization is infallible");
        let envelope = Envelope {
            format_version: CACHE_FORMAT_VERSION,
            checksum: hex_digest(&payload),
            tables: RawValue::from_string(payload)
                .expect("a serde_json string is valid JSON"),
        };
        let text =
            serde_json::to_string_pretty(&envelope).expect("cache serialization is infallible");
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(|source| ToolkitError::Io {
                    path: parent.to_owned(),
                    source,
                })?;
            }
        }
        fs::write(path, text).map_err(|source| ToolkitError::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ToolkitError> {
        let text = fs::read_to_string(path).map_err(|source| ToolkitError::Io {
            path: path.to_owned(),
            source,
        })?;
        let envelope: Envelope =
            serde_json::from_str(&text).map_err(|source| ToolkitError::Malformed {
                path: path.to_owned(),
                source,
            })?;
        if envelope.format_version != CACHE_FORMAT_VERSION {
            return Err(ToolkitError::CacheVersionMismatch {
                found: envelope.format_version,
                expected: CACHE_FORMAT_VERSION,
            });
        }
        let payload = envelope.tables.get();
        if hex_digest(payload) != envelope.checksum {
            return Err(ToolkitError::CacheChecksum);
        }
        let entries: Vec<CacheEntry> =
            serde_json::from_str(payload).map_err(|source| ToolkitError::Malformed {
                path: path.to_owned(),
                source,
            })?;
        Ok(CacheFile {
            entries: entries.into_iter().map(|e| (e.key, e.table)).collect(),
        })
    }
}

fn hex_digest(payload: &str) -> String {
    let digest = Sha256::digest(payload.as_bytes());
    let mut out = String::with_capacity(digest.len() * 2);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// Resolves the cache file path: an explicit flag wins, then the
/// `EULERIAN_LAB_CACHE` environment variable, then `<data_dir>/cache.json`.
pub fn resolve_cache_path(explicit: Option<&Path>, data_dir: &Path) -> PathBuf {
    if let Some(path) = explicit {
        return path.to_owned();
    }
    if let Ok(from_env) = env::var(CACHE_ENV_VAR) {
        if !from_env.is_empty() {
            return PathBuf::from(from_env);
        }
    }
    data_dir.join("cache.json")
}
