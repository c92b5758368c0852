//! OEIS-style b-file ingestion and sequence cross-checks.
//!
//! A b-file is plain UTF-8 text with one `index value` pair per line,
//! whitespace separated; lines starting with `#` are comments. Indices
//! must be consecutive. Reference files live in the repository and are
//! refreshed manually — nothing here touches the network.

use std::fmt;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use super::ToolkitError;
use crate::counting::{CountKey, CountTable};
use crate::identities::{ReferenceSeq, Verdict};

/// A parsed integer sequence with its first index and provenance tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFileSequence {
    /// Index of the first value.
    pub offset: i64,
    pub values: Vec<BigUint>,
    /// Identifier of the source, e.g. `"A120434"`.
    pub source_id: String,
}

impl BFileSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a source index (i.e. counted from `offset`).
    pub fn value_at(&self, index: i64) -> Option<&BigUint> {
        let pos = index.checked_sub(self.offset)?;
        usize::try_from(pos).ok().and_then(|p| self.values.get(p))
    }

    /// View as a reference sequence for the identity harness.
    pub fn to_reference(&self) -> ReferenceSeq {
        ReferenceSeq {
            source_id: self.source_id.clone(),
            values: self.values.clone(),
        }
    }
}

/// Parses b-file text. Values must be non-negative integers (every
/// sequence handled here is a count); any sign or stray token is a
/// malformed line.
pub fn parse_bfile(
    text: &str,
    source_id: impl Into<String>,
) -> Result<BFileSequence, ToolkitError> {
    let source_id = source_id.into();
    let mut offset: Option<i64> = None;
    let mut next_index = 0i64;
    let mut values = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || ToolkitError::MalformedBFileLine {
            source_id: source_id.clone(),
            line_no: line_no + 1,
            content: raw.to_owned(),
        };
        let mut parts = line.split_whitespace();
        let index: i64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(malformed)?;
        let value: BigUint = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(malformed)?;
        if parts.next().is_some() {
            return Err(malformed());
        }
        match offset {
            None => offset = Some(index),
            Some(_) if index != next_index => {
                return Err(ToolkitError::NonContiguousIndices {
                    source_id,
                    expected: next_index,
                    found: index,
                });
            }
            Some(_) => {}
        }
        next_index = index + 1;
        values.push(value);
    }
    let Some(offset) = offset else {
        return Err(ToolkitError::EmptyBFile { source_id });
    };
    Ok(BFileSequence {
        offset,
        values,
        source_id,
    })
}

/// Reads and parses a b-file; the file stem becomes the source id.
pub fn read_bfile(path: &Path) -> Result<BFileSequence, ToolkitError> {
    let text = fs::read_to_string(path).map_err(|source| ToolkitError::Io {
        path: path.to_owned(),
        source,
    })?;
    let source_id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("sequence")
        .to_owned();
    parse_bfile(&text, source_id)
}

/// How a table is linearized for sequence comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReadOrder {
    /// Rows by increasing `n`, inner indices ascending — the order a
    /// triangle reads left to right, top to bottom.
    #[default]
    RowMajor,
}

/// Reads a table out densely in the given order: for each `n` present in
/// the table, the full `m` range `0..n` (and `k` range `1..=n` when the
/// table is refined), zeros included.
pub fn linearize(table: &CountTable, order: ReadOrder) -> Vec<BigUint> {
    let ReadOrder::RowMajor = order;
    let first = table.iter().next();
    let refined = first.map(|(key, _)| key.k.is_some()).unwrap_or(false);
    let r = first.and_then(|(key, _)| key.r);
    let mut sizes: Vec<u32> = table.iter().map(|(key, _)| key.n).collect();
    sizes.dedup(); // key order is n-major, so duplicates are adjacent
    let mut out = Vec::new();
    for n in sizes {
        for m in 0..n {
            if refined {
                for k in 1..=n {
                    out.push(table.get(&CountKey {
                        n,
                        r,
                        m,
                        k: Some(k),
                    }));
                }
            } else {
                out.push(table.get(&CountKey::plain(n, m)));
            }
        }
    }
    out
}

/// One disagreement between a table read-out and a reference sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// 0-based position within the compared overlap.
    pub position: usize,
    /// The reference's own index at that position (`offset + position`).
    pub reference_index: i64,
    pub table_value: BigUint,
    pub reference_value: BigUint,
}

/// Outcome of one table-versus-reference comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub source_id: String,
    /// Number of positions compared: the shorter of the two lengths.
    pub compared: usize,
    pub verdict: Verdict,
    pub first_mismatch: Option<Mismatch>,
    pub wall_time: Duration,
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reference: {}", self.source_id)?;
        writeln!(f, "  compared: {} values", self.compared)?;
        writeln!(f, "  verdict: {}", self.verdict)?;
        if let Some(m) = &self.first_mismatch {
            writeln!(
                f,
                "  first mismatch at position {} (reference index {}): table = {}, reference = {}",
                m.position, m.reference_index, m.table_value, m.reference_value
            )?;
        }
        writeln!(f, "  wall time: {:.3}s", self.wall_time.as_secs_f64())?;
        Ok(())
    }
}

/// Compares a table's dense read-out against a reference sequence,
/// element-wise up to the shorter length, and reports the first mismatch.
pub fn crosscheck_sequence(
    table: &CountTable,
    order: ReadOrder,
    reference: &BFileSequence,
) -> Result<CrosscheckReport, ToolkitError> {
    let start = Instant::now();
    let readout = linearize(table, order);
    let compared = readout.len().min(reference.values.len());
    if compared == 0 {
        return Err(ToolkitError::EmptyOverlap {
            source_id: reference.source_id.clone(),
        });
    }
    let first_mismatch = readout
        .iter()
        .zip(&reference.values)
        .position(|(a, b)| a != b)
        .map(|position| Mismatch {
            position,
            reference_index: reference.offset + position as i64,
            table_value: readout[position].clone(),
            reference_value: reference.values[position].clone(),
        });
    Ok(CrosscheckReport {
        source_id: reference.source_id.clone(),
        compared,
        verdict: if first_mismatch.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        first_mismatch,
        wall_time: start.elapsed(),
    })
}
