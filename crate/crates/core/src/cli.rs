//! Command-line interface.
//!
//! Exit codes: `0` success (and all verdicts PASS), `1` at least one
//! verification FAIL (the counterexample is printed), `2` usage or input
//! error. Configuration layering: built-in defaults, then the optional
//! `--config` JSON file, then command-line flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use crate::counting::{
    count_by_enumeration_upto, eulerian_recurrence, factorial, TableKind,
};
use crate::foata::{foata_inverse, foata_transform};
use crate::identities::{
    verify, FootnoteRefs, IdentityId, SweepRanges, Verdict, VerificationReport, VerifyOptions,
};
use crate::perm::{Permutation, StatFamily, StatKind, DEFAULT_ENUMERATION_BOUND};
use crate::toolkit::bfile::{crosscheck_sequence, read_bfile, CrosscheckReport, ReadOrder};
use crate::toolkit::cache::{resolve_cache_path, CacheFile};
use crate::toolkit::config::Config;
use crate::toolkit::export::{
    crosscheck_to_json, report_to_json, table_to_json, triangle_csv, write_text, OutputFormat,
};
use crate::trees::{count_t, r_recurrence_table, DEFAULT_TREE_BOUND};

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

#[derive(Parser)]
#[command(
    name = "eulerian-lab",
    version,
    about = "Exact permutation statistics, recursive-tree counts, and identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Optional JSON configuration file (flags override its values)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_parser = parse_format, value_name = "csv|json")]
    format: Option<OutputFormat>,

    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Largest word length swept by `verify`
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<u32>,

    /// Largest statistic distance swept by `verify`
    #[arg(long, global = true, value_name = "R")]
    max_r: Option<u32>,

    /// Largest free variable swept by `verify`
    #[arg(long, global = true, value_name = "X")]
    max_x: Option<u32>,

    /// Worker-thread count for parallel enumeration
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Directory holding reference b-files and the default cache
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a counting triangle: one row per word length
    Triangle {
        /// eulerian, descent, ascent, excedance, or anti-excedance
        #[arg(long, default_value = "eulerian")]
        kind: String,
        /// Statistic distance (statistic kinds only)
        #[arg(long)]
        r: Option<u32>,
        /// Number of rows
        #[arg(long)]
        n: u32,
    },
    /// Per-permutation statistics of one word
    Stats {
        /// The word, e.g. "5,1,2,8,3,6,4,7" or "51283647"
        #[arg(long)]
        word: String,
        /// Statistic distance
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Apply the fundamental transform (or its inverse) to a word
    Foata {
        /// The word, e.g. "6,2,1,4,5,7,3" or "6214573"
        #[arg(long)]
        word: String,
        /// Apply the inverse direction
        #[arg(long)]
        inverse: bool,
    },
    /// Count recursive trees: totals, leaf counts T, refined counts R
    Trees {
        /// Number of vertices
        #[arg(long)]
        n: usize,
        /// Number of degree-one vertices (selects one T cell)
        #[arg(long)]
        ell: Option<usize>,
        /// Endpoint of the minimal-label path (with --ell, selects one R cell)
        #[arg(long)]
        x: Option<u32>,
    },
    /// Run the identity-verification harness
    Verify {
        /// Identity id (see --list)
        #[arg(long, conflicts_with_all = ["all", "list"])]
        id: Option<String>,
        /// Verify every identity
        #[arg(long, conflicts_with = "list")]
        all: bool,
        /// List the known identity ids and exit
        #[arg(long)]
        list: bool,
    },
    /// Cross-check tables against committed reference sequences
    OeisCheck {
        /// triangle (committed classical-triangle transcription) or footnote
        /// (reference-alignment findings)
        #[arg(long, default_value = "triangle", value_parser = ["triangle", "footnote"])]
        target: String,
        /// Override the b-file compared by the triangle target
        #[arg(long, value_name = "PATH")]
        bfile: Option<PathBuf>,
    },
    /// Build or inspect the persistent table cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Compute standard tables up to --max-n and save them
    Build {
        /// Cache file (default: EULERIAN_LAB_CACHE or <data-dir>/cache.json)
        #[arg(long, value_name = "PATH")]
        cache_path: Option<PathBuf>,
    },
    /// List the contents of the cache file
    Show {
        /// Cache file (default: EULERIAN_LAB_CACHE or <data-dir>/cache.json)
        #[arg(long, value_name = "PATH")]
        cache_path: Option<PathBuf>,
    },
}

/// Settings after layering defaults, the config file, and flags.
struct Effective {
    ranges: SweepRanges,
    format: OutputFormat,
    out: Option<PathBuf>,
    data_dir: PathBuf,
}

/// Parses `argv` and runs; the return value is the process exit code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    if let Some(jobs) = cli.jobs.or(config.jobs) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| format!("cannot configure {jobs} worker threads: {e}"))?;
    }
    let defaults = SweepRanges::default();
    let eff = Effective {
        ranges: SweepRanges {
            max_n: cli.max_n.or(config.max_n).unwrap_or(defaults.max_n),
            max_r: cli.max_r.or(config.max_r).unwrap_or(defaults.max_r),
            max_x: cli.max_x.or(config.max_x).unwrap_or(defaults.max_x),
        },
        format: cli.format.unwrap_or_default(),
        out: cli.out.clone(),
        data_dir: cli
            .data_dir
            .clone()
            .or(config.data_dir.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("data")),
    };
    match cli.command {
        Command::Triangle { kind, r, n } => run_triangle(&eff, &kind, r, n),
        Command::Stats { word, r } => run_stats(&eff, &word, r),
        Command::Foata { word, inverse } => run_foata(&eff, &word, inverse),
        Command::Trees { n, ell, x } => run_trees(&eff, n, ell, x),
        Command::Verify { id, all, list } => run_verify(&eff, id.as_deref(), all, list),
        Command::OeisCheck { target, bfile } => run_oeis_check(&eff, &target, bfile.as_deref()),
        Command::Cache { action } => run_cache(&eff, &action),
    }
}

fn emit(eff: &Effective, text: &str) -> Result<(), String> {
    match &eff.out {
        Some(path) => write_text(path, text).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(eff: &Effective, value: &serde_json::Value) -> Result<(), String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(eff, &text)
}

fn parse_word(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty word".to_owned());
    }
    if s.contains(',') || s.contains(' ') {
        s.split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|e| format!("bad letter {t:?}: {e}"))
            })
            .collect()
    } else {
        // compact digit form, e.g. "51283647"
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| format!("not a digit: {c:?} (use commas for n > 9)"))
            })
            .collect()
    }
}

fn join_word(word: &[u32]) -> String {
    word.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run_triangle(eff: &Effective, kind: &str, r: Option<u32>, n: u32) -> Result<u8, String> {
    let kind: TableKind = kind.parse().map_err(|_| {
        format!(
            "unknown table kind {kind:?}; expected eulerian, descent, ascent, excedance, or anti-excedance"
        )
    })?;
    let table = match kind {
        TableKind::Eulerian => {
            if r.is_some() {
                return Err("--r applies only to statistic kinds".to_owned());
            }
            eulerian_recurrence(n).map_err(|e| e.to_string())?
        }
        TableKind::Stat(family) => {
            if n as usize > DEFAULT_ENUMERATION_BOUND {
                return Err(format!(
                    "statistic triangles are enumerated exhaustively; --n must be <= {DEFAULT_ENUMERATION_BOUND}"
                ));
            }
            let stat = StatKind::new(family, r.unwrap_or(1)).map_err(|e| e.to_string())?;
            count_by_enumeration_upto(n as usize, stat).map_err(|e| e.to_string())?
        }
    };
    match eff.format {
        OutputFormat::Csv => emit(eff, &triangle_csv(&table, n))?,
        OutputFormat::Json => emit(eff, &table_to_json(&table))?,
    }
    Ok(0)
}

fn run_stats(eff: &Effective, word: &str, r: u32) -> Result<u8, String> {
    let word = parse_word(word)?;
    let p = Permutation::new(word).map_err(|e| e.to_string())?;
    let mut kinds = Vec::new();
    for family in StatFamily::ALL {
        let stat = StatKind::new(family, r).map_err(|e| e.to_string())?;
        kinds.push((family, p.count_stat(stat), p.positions_stat(stat)));
    }
    match eff.format {
        OutputFormat::Csv => {
            let mut text = String::new();
            let _ = writeln!(text, "word: {}", join_word(p.word()));
            let _ = writeln!(text, "n = {}, last letter = {}, r = {r}", p.len(), p.last());
            for (family, count, positions) in &kinds {
                let shown = if positions.is_empty() {
                    "-".to_owned()
                } else {
                    positions
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                let _ = writeln!(text, "{}: count {count}, positions {shown}", family.name());
            }
            emit(eff, &text)?;
        }
        OutputFormat::Json => {
            let stats: serde_json::Map<String, serde_json::Value> = kinds
                .iter()
                .map(|(family, count, positions)| {
                    (
                        family.name().to_owned(),
                        json!({ "count": count, "positions": positions }),
                    )
                })
                .collect();
            emit_json(
                eff,
                &json!({
                    "word": p.word(),
                    "n": p.len(),
                    "last": p.last(),
                    "r": r,
                    "stats": stats,
                }),
            )?;
        }
    }
    Ok(0)
}

fn run_foata(eff: &Effective, word: &str, inverse: bool) -> Result<u8, String> {
    let word = parse_word(word)?;
    let p = Permutation::new(word).map_err(|e| e.to_string())?;
    let image = if inverse {
        foata_inverse(&p)
    } else {
        foata_transform(&p)
    };
    match eff.format {
        OutputFormat::Csv => emit(eff, &format!("{}\n", join_word(image.word())))?,
        OutputFormat::Json => emit_json(
            eff,
            &json!({
                "input": p.word(),
                "output": image.word(),
                "direction": if inverse { "inverse" } else { "forward" },
            }),
        )?,
    }
    Ok(0)
}

fn run_trees(
    eff: &Effective,
    n: usize,
    ell: Option<usize>,
    x: Option<u32>,
) -> Result<u8, String> {
    if n == 0 {
        return Err("--n must be at least 1".to_owned());
    }
    match (ell, x) {
        (None, Some(_)) => Err("--x needs --ell (an R cell is indexed by both)".to_owned()),
        (Some(ell), Some(x)) => {
            // single refined cell, recurrence route
            let table = r_recurrence_table(n).map_err(|e| e.to_string())?;
            let value = table.value(ell, x);
            match eff.format {
                OutputFormat::Csv => emit(
                    eff,
                    &format!("R({n}, {ell}, {x}) = {value} (recurrence route)\n"),
                )?,
                OutputFormat::Json => emit_json(
                    eff,
                    &json!({
                        "n": n, "ell": ell, "x": x,
                        "r_value": value.to_string(),
                        "route": "recurrence",
                    }),
                )?,
            }
            Ok(0)
        }
        (Some(ell), None) => {
            let value = count_t(n, ell).map_err(|e| e.to_string())?;
            match eff.format {
                OutputFormat::Csv => emit(
                    eff,
                    &format!("T({n}, {ell}) = {value} (enumeration route)\n"),
                )?,
                OutputFormat::Json => emit_json(
                    eff,
                    &json!({
                        "n": n, "ell": ell,
                        "t_value": value.to_string(),
                        "route": "enumeration",
                    }),
                )?,
            }
            Ok(0)
        }
        (None, None) => {
            let total = factorial(n as u64 - 1);
            let mut distribution: Vec<(usize, BigUint)> = Vec::new();
            if n >= 2 && n <= DEFAULT_TREE_BOUND {
                let hi = if n == 2 { 2 } else { n - 1 };
                for ell in 2..=hi {
                    distribution.push((ell, count_t(n, ell).map_err(|e| e.to_string())?));
                }
            }
            match eff.format {
                OutputFormat::Csv => {
                    let mut text = String::new();
                    let _ = writeln!(text, "vertices: {n}");
                    let _ = writeln!(text, "trees: {total}");
                    for (ell, value) in &distribution {
                        let _ = writeln!(text, "T({n}, {ell}) = {value}");
                    }
                    if n > DEFAULT_TREE_BOUND {
                        let _ = writeln!(
                            text,
                            "leaf counts need exhaustive enumeration (n <= {DEFAULT_TREE_BOUND})"
                        );
                    }
                    emit(eff, &text)?;
                }
                OutputFormat::Json => {
                    let t: serde_json::Map<String, serde_json::Value> = distribution
                        .iter()
                        .map(|(ell, value)| (ell.to_string(), json!(value.to_string())))
                        .collect();
                    emit_json(
                        eff,
                        &json!({
                            "n": n,
                            "trees": total.to_string(),
                            "t": t,
                        }),
                    )?;
                }
            }
            Ok(0)
        }
    }
}

fn load_footnote_refs(data_dir: &Path) -> Result<FootnoteRefs, String> {
    let two_eulerian = read_bfile(&data_dir.join("A144696.txt")).map_err(|e| e.to_string())?;
    let doubled = read_bfile(&data_dir.join("A120434.txt")).map_err(|e| e.to_string())?;
    Ok(FootnoteRefs {
        two_eulerian: two_eulerian.to_reference(),
        doubled: doubled.to_reference(),
    })
}

fn run_verify(eff: &Effective, id: Option<&str>, all: bool, list: bool) -> Result<u8, String> {
    if list {
        let mut text = String::new();
        for id in IdentityId::ALL {
            let _ = writeln!(text, "{:<22} {}", id.id(), id.description());
        }
        emit(eff, &text)?;
        return Ok(0);
    }
    let ids: Vec<IdentityId> = match (id, all) {
        (Some(id), false) => vec![id.parse().map_err(
            |e| format!("{e}; run `verify --list` for the known ids"),
        )?],
        (None, true) => IdentityId::ALL.to_vec(),
        (None, false) => return Err("pass --id ID, --all, or --list".to_owned()),
        (Some(_), true) => unreachable!("clap rejects --id with --all"),
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for identity in ids {
        let mut opts = VerifyOptions {
            ranges: eff.ranges,
            reference: None,
        };
        if identity == IdentityId::ReferenceAlignment {
            match load_footnote_refs(&eff.data_dir) {
                Ok(refs) => opts.reference = Some(refs),
                Err(e) if all => {
                    skipped.push(format!(
                        "{}: skipped (reference data unavailable: {e})",
                        identity.id()
                    ));
                    continue;
                }
                Err(e) => return Err(e),
            }
        }
        reports.push(verify(identity, &opts).map_err(|e| e.to_string())?);
    }
    let any_fail = reports.iter().any(|r| r.verdict == Verdict::Fail);
    match eff.format {
        OutputFormat::Csv => {
            let mut text = String::new();
            for report in &reports {
                let _ = write!(text, "{report}");
            }
            for line in &skipped {
                let _ = writeln!(text, "{line}");
            }
            emit(eff, &text)?;
        }
        OutputFormat::Json => {
            let values: Vec<serde_json::Value> = reports.iter().map(report_to_json).collect();
            let payload = if all {
                json!({ "reports": values, "skipped": skipped })
            } else {
                values.into_iter().next().expect("one id yields one report")
            };
            emit_json(eff, &payload)?;
        }
    }
    Ok(if any_fail { 1 } else { 0 })
}

fn emit_crosscheck(eff: &Effective, report: &CrosscheckReport) -> Result<u8, String> {
    match eff.format {
        OutputFormat::Csv => emit(eff, &report.to_string())?,
        OutputFormat::Json => emit_json(eff, &crosscheck_to_json(report))?,
    }
    Ok(if report.verdict == Verdict::Fail { 1 } else { 0 })
}

fn run_oeis_check(eff: &Effective, target: &str, bfile: Option<&Path>) -> Result<u8, String> {
    match target {
        "triangle" => {
            let path = bfile
                .map(Path::to_owned)
                .unwrap_or_else(|| eff.data_dir.join("table1_eulerian.txt"));
            let reference = read_bfile(&path).map_err(|e| e.to_string())?;
            // enough triangle rows to cover the reference
            let mut rows = 1u32;
            while (rows as usize) * (rows as usize + 1) / 2 < reference.len() && rows < 500 {
                rows += 1;
            }
            let table = eulerian_recurrence(rows).map_err(|e| e.to_string())?;
            let report = crosscheck_sequence(&table, ReadOrder::RowMajor, &reference)
                .map_err(|e| e.to_string())?;
            emit_crosscheck(eff, &report)
        }
        "footnote" => {
            let refs = load_footnote_refs(&eff.data_dir)?;
            let opts = VerifyOptions {
                ranges: eff.ranges,
                reference: Some(refs),
            };
            let report =
                verify(IdentityId::ReferenceAlignment, &opts).map_err(|e| e.to_string())?;
            let code = if report.verdict == Verdict::Fail { 1 } else { 0 };
            match eff.format {
                OutputFormat::Csv => emit(eff, &report.to_string())?,
                OutputFormat::Json => emit_json(eff, &report_to_json(&report))?,
            }
            Ok(code)
        }
        other => Err(format!("unknown target {other:?}")),
    }
}

fn run_cache(eff: &Effective, action: &CacheAction) -> Result<u8, String> {
    match action {
        CacheAction::Build { cache_path } => {
            let path = resolve_cache_path(cache_path.as_deref(), &eff.data_dir);
            let mut cache = CacheFile::new();
            cache.insert(eulerian_recurrence(eff.ranges.max_n).map_err(|e| e.to_string())?);
            for n in 1..=eff.ranges.max_n {
                cache.insert(
                    crate::counting::a_nmk_table(n).map_err(|e| e.to_string())?,
                );
            }
            cache.save(&path).map_err(|e| e.to_string())?;
            emit(
                eff,
                &format!("cached {} tables to {}\n", cache.len(), path.display()),
            )?;
            Ok(0)
        }
        CacheAction::Show { cache_path } => {
            let path = resolve_cache_path(cache_path.as_deref(), &eff.data_dir);
            let cache = CacheFile::load(&path).map_err(|e| e.to_string())?;
            let mut text = String::new();
            let _ = writeln!(text, "cache: {}", path.display());
            let _ = writeln!(text, "format version: {}", cache.format_version());
            for key in cache.keys() {
                let entries = cache.get(key).map(|t| t.len()).unwrap_or(0);
                let _ = writeln!(text, "{key}: {entries} entries");
            }
            emit(eff, &text)?;
            Ok(0)
        }
    }
}
