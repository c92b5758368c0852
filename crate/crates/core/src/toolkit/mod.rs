//! Artifact plumbing around the mathematical core: b-file ingestion and
//! sequence cross-checks, CSV/JSON exporters, a persistent table cache,
//! and optional file-based configuration.

pub mod bfile;
pub mod cache;
pub mod config;
pub mod export;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Environment variable that overrides the cache file location.
pub const CACHE_ENV_VAR: &str = "EULERIAN_LAB_CACHE";

#[derive(Debug, Error)]
pub enum ToolkitError {
    #[error("{source_id} line {line_no}: malformed b-file line {content:?}")]
    MalformedBFileLine {
        source_id: String,
        line_no: usize,
        content: String,
    },
    #[error("{source_id}: non-contiguous indices: expected {expected}, found {found}")]
    NonContiguousIndices {
        source_id: String,
        expected: i64,
        found: i64,
    },
    #[error("{source_id}: b-file has no data lines")]
    EmptyBFile { source_id: String },
    #[error("empty overlap between the table read-out and reference {source_id}")]
    EmptyOverlap { source_id: String },
    #[error("cache format version mismatch: file declares {found}, this build reads {expected}")]
    CacheVersionMismatch { found: u32, expected: u32 },
    #[error("cache checksum mismatch: payload does not match its recorded digest")]
    CacheChecksum,
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    Malformed {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
