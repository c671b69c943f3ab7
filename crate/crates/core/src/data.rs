//! Shipped matrix tables.
//!
//! Two plain-text assets ship with the crate and are embedded at compile time:
//!
//! * `appendix_a/rNN.txt`: `(r, 3, b)`-matrices for `3 <= r <= 10`, one file per `r`;
//! * `corank2_exceptions.txt`: two-column stubs for the `b` values the
//!   sum-of-squares construction cannot reach.
//!
//! Each file is a sequence of entries. An entry is a header line `rows b`
//! followed by `rows` lines of whitespace-separated integers. Blank lines and
//! lines starting with `#` are ignored. Setting `MATROID_FORGE_DATA` to a
//! directory with the same layout replaces the embedded copies at runtime.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::corank2::Corank2ExceptionTable;
use crate::corank3::AppendixATable;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

pub const DATA_DIR_ENV: &str = "MATROID_FORGE_DATA";

const APPENDIX_A: [(usize, &str); 8] = [
    (3, include_str!("../data/appendix_a/r03.txt")),
    (4, include_str!("../data/appendix_a/r04.txt")),
    (5, include_str!("../data/appendix_a/r05.txt")),
    (6, include_str!("../data/appendix_a/r06.txt")),
    (7, include_str!("../data/appendix_a/r07.txt")),
    (8, include_str!("../data/appendix_a/r08.txt")),
    (9, include_str!("../data/appendix_a/r09.txt")),
    (10, include_str!("../data/appendix_a/r10.txt")),
];

const CORANK2_EXCEPTIONS: &str = include_str!("../data/corank2_exceptions.txt");

/// One `rows b` entry of a table file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub b: u128,
    pub matrix: IntMatrix,
}

/// Parses a table file whose matrices all have `cols` columns.
pub fn parse_table(text: &str, cols: usize) -> Result<Vec<TableEntry>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let mut out = Vec::new();
    while let Some((line, header)) = lines.next() {
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [rows, b] = fields[..] else {
            return Err(Error::Parse {
                line,
                msg: format!("expected header `rows b`, found `{header}`"),
            });
        };
        let rows: usize = rows.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad row count `{rows}`"),
        })?;
        let b: u128 = b.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad basis count `{b}`"),
        })?;
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let Some((line, body)) = lines.next() else {
                return Err(Error::Parse {
                    line,
                    msg: format!("entry b = {b} ends before its {rows} rows"),
                });
            };
            let values = parse_row(body, line)?;
            if values.len() != cols {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {cols} integers, found {}", values.len()),
                });
            }
            entries.extend(values);
        }
        out.push(TableEntry {
            b,
            matrix: IntMatrix::new(rows, cols, entries)?,
        });
    }
    Ok(out)
}

pub(crate) fn parse_row(body: &str, line: usize) -> Result<Vec<BigInt>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<BigInt>().map_err(|_| Error::Parse {
                line,
                msg: format!("`{tok}` is not an integer"),
            })
        })
        .collect()
}

/// Every shipped table, validated.
#[derive(Clone, Debug)]
pub struct Assets {
    pub appendix_a: AppendixATable,
    pub corank2: Corank2ExceptionTable,
}

impl Assets {
    pub fn embedded() -> Result<Self> {
        let mut files = Vec::new();
        for (r, text) in APPENDIX_A {
            files.push((r, parse_table(text, 3)?));
        }
        Ok(Self {
            appendix_a: AppendixATable::from_files(files)?,
            corank2: Corank2ExceptionTable::from_entries(parse_table(CORANK2_EXCEPTIONS, 2)?)?,
        })
    }

    /// Loads `dir/appendix_a/r03.txt ..= r10.txt` and `dir/corank2_exceptions.txt`.
    pub fn load_from_dir(dir: &Path) -> Result<Self> {
        let read = |p: PathBuf| {
            std::fs::read_to_string(&p).map_err(|e| Error::Data(format!("{}: {e}", p.display())))
        };
        let mut files = Vec::new();
        for r in 3..=10 {
            let text = read(dir.join("appendix_a").join(format!("r{r:02}.txt")))?;
            files.push((r, parse_table(&text, 3)?));
        }
        let text = read(dir.join("corank2_exceptions.txt"))?;
        Ok(Self {
            appendix_a: AppendixATable::from_files(files)?,
            corank2: Corank2ExceptionTable::from_entries(parse_table(&text, 2)?)?,
        })
    }
}

/// The process-wide tables: the directory named by `MATROID_FORGE_DATA` if
/// set, otherwise the embedded copies. Loaded once.
pub fn assets() -> Result<&'static Assets> {
    static ASSETS: OnceLock<std::result::Result<Assets, String>> = OnceLock::new();
    ASSETS
        .get_or_init(|| {
            let loaded = match std::env::var_os(DATA_DIR_ENV) {
                Some(dir) => Assets::load_from_dir(Path::new(&dir)),
                None => Assets::embedded(),
            };
            loaded.map_err(|e| e.to_string())
        })
        .as_ref()
        .map_err(|e| Error::Data(e.clone()))
}
