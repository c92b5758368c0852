//! CSV and JSON emitters for count tables and verification reports.
//!
//! Two CSV shapes exist on purpose: `table_to_csv` is the dense export
//! (header naming the indices, one row per cell, zeros included), while
//! `triangle_csv` renders bare ragged rows — the shape a triangle is
//! usually displayed in.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::json;

use super::bfile::CrosscheckReport;
use super::ToolkitError;
use crate::counting::{CountKey, CountTable};
use crate::identities::{Counterexample, VerificationReport};

/// Output formats the exporters and the CLI understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

fn table_shape(table: &CountTable) -> (bool, Option<u32>) {
    let first = table.iter().next();
    (
        first.map(|(key, _)| key.k.is_some()).unwrap_or(false),
        first.and_then(|(key, _)| key.r),
    )
}

/// Dense CSV: a header naming the indices, then one row per cell of the
/// rectangle each present `n` spans, row-major, zeros included.
pub fn table_to_csv(table: &CountTable) -> String {
    let (refined, r) = table_shape(table);
    let mut out = String::new();
    out.push_str(if refined { "n,r,m,k,value\n" } else { "n,m,value\n" });
    let mut sizes: Vec<u32> = table.iter().map(|(key, _)| key.n).collect();
    sizes.dedup(); // key order is n-major, so duplicates are adjacent
    for n in sizes {
        for m in 0..n {
            if refined {
                for k in 1..=n {
                    let v = table.get(&CountKey {
                        n,
                        r,
                        m,
                        k: Some(k),
                    });
                    let _ = writeln!(out, "{n},{},{m},{k},{v}", r.unwrap_or(1));
                }
            } else {
                let v = table.get(&CountKey::plain(n, m));
                let _ = writeln!(out, "{n},{m},{v}");
            }
        }
    }
    out
}

/// Sparse JSON (support only): the table's own serialization, with values
/// as decimal strings.
pub fn table_to_json(table: &CountTable) -> String {
    let mut text =
        serde_json::to_string_pretty(table).expect("table serialization is infallible");
    text.push('\n');
    text
}

/// The rows of a triangle view: for each `n`, the values at `m = 0..n`.
/// Refined tables are collapsed over the last letter `k` first.
pub fn triangle_rows(table: &CountTable, max_n: u32) -> Vec<Vec<BigUint>> {
    let (refined, r) = table_shape(table);
    (1..=max_n)
        .map(|n| {
            (0..n)
                .map(|m| {
                    if refined {
                        (1..=n)
                            .map(|k| {
                                table.get(&CountKey {
                                    n,
                                    r,
                                    m,
                                    k: Some(k),
                                })
                            })
                            .sum()
                    } else {
                        table.get(&CountKey::plain(n, m))
                    }
                })
                .collect()
        })
        .collect()
}

/// Bare ragged CSV rows — `1`, `1,1`, `1,4,1`, … — one line per `n`.
pub fn triangle_csv(table: &CountTable, max_n: u32) -> String {
    let mut out = String::new();
    for row in triangle_rows(table, max_n) {
        let line = row
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Writes a table to `destination` in the given format.
pub fn export_table(
    table: &CountTable,
    format: OutputFormat,
    destination: &Path,
) -> Result<(), ToolkitError> {
    let text = match format {
        OutputFormat::Csv => table_to_csv(table),
        OutputFormat::Json => table_to_json(table),
    };
    write_text(destination, &text)
}

/// Writes text to a file, surfacing failures with the path attached.
pub fn write_text(path: &Path, text: &str) -> Result<(), ToolkitError> {
    fs::write(path, text).map_err(|source| ToolkitError::Io {
        path: path.to_owned(),
        source,
    })
}

fn counterexample_json(ce: &Counterexample) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    obj.insert("n".to_owned(), json!(ce.n));
    if let Some(r) = ce.r {
        obj.insert("r".to_owned(), json!(r));
    }
    if let Some(m) = ce.m {
        obj.insert("m".to_owned(), json!(m));
    }
    if let Some(k) = ce.k {
        obj.insert("k".to_owned(), json!(k));
    }
    if let Some(x) = ce.x {
        obj.insert("x".to_owned(), json!(x));
    }
    for (name, value) in &ce.extra {
        obj.insert(name.clone(), json!(value));
    }
    obj.insert("lhs".to_owned(), json!(ce.lhs.to_string()));
    obj.insert("rhs".to_owned(), json!(ce.rhs.to_string()));
    obj.insert("revalidated".to_owned(), json!(ce.revalidated));
    serde_json::Value::Object(obj)
}

/// Serializes a verification report. Exact sides are decimal strings.
pub fn report_to_json(report: &VerificationReport) -> serde_json::Value {
    json!({
        "identity": report.identity.id(),
        "description": report.identity.description(),
        "ranges": {
            "max_n": report.ranges.max_n,
            "max_r": report.ranges.max_r,
            "max_x": report.ranges.max_x,
        },
        "verdict": report.verdict.to_string(),
        "counterexample": report.counterexample.as_ref().map(counterexample_json),
        "cells_checked": report.cells_checked,
        "wall_time_seconds": report.wall_time.as_secs_f64(),
        "notes": report.notes,
    })
}

/// Serializes a sequence cross-check report.
pub fn crosscheck_to_json(report: &CrosscheckReport) -> serde_json::Value {
    json!({
        "reference": report.source_id,
        "compared": report.compared,
        "verdict": report.verdict.to_string(),
        "first_mismatch": report.first_mismatch.as_ref().map(|m| json!({
            "position": m.position,
            "reference_index": m.reference_index,
            "table_value": m.table_value.to_string(),
            "reference_value": m.reference_value.to_string(),
        })),
        "wall_time_seconds": report.wall_time.as_secs_f64(),
    })
}
