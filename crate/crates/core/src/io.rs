//! Matrix files.
//!
//! Text: a header line `r k`, then `r` lines of `k` integers. JSON (chosen by a
//! `.json` extension): `{"rows": r, "cols": k, "entries": [[...], ...]}`, where
//! an entry too large for a JSON number may be given as a decimal string.

use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::count_square_invertible;
use crate::data::parse_row;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

pub fn parse_text(text: &str) -> Result<IntMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((line, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            msg: "empty file".into(),
        });
    };
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("bad header `{header}`"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line,
            msg: format!("expected `r k`, found `{header}`"),
        });
    };
    let mut entries = Vec::with_capacity(rows * cols);
    // rows of a zero-column matrix are blank lines
    for i in 0..if cols == 0 { 0 } else { rows } {
        let Some((line, body)) = lines.next() else {
            return Err(Error::Parse {
                line,
                msg: format!("expected {rows} rows, found {i}"),
            });
        };
        let row = parse_row(body, line)?;
        if row.len() != cols {
            return Err(Error::Parse {
                line,
                msg: format!("expected {cols} integers, found {}", row.len()),
            });
        }
        entries.extend(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: "trailing data after the last row".into(),
        });
    }
    IntMatrix::new(rows, cols, entries)
}

pub fn to_text(m: &IntMatrix) -> String {
    format!("{} {}\n{m}", m.rows(), m.cols())
}

pub fn parse_json(text: &str) -> Result<IntMatrix> {
    let v: Value = serde_json::from_str(text)?;
    let field = |name: &str| {
        v.get(name)
            .ok_or_else(|| Error::Input(format!("JSON matrix lacks `{name}`")))
    };
    let dim = |name: &str| -> Result<usize> {
        field(name)?
            .as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| Error::Input(format!("`{name}` must be a nonnegative integer")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let list = field("entries")?
        .as_array()
        .ok_or_else(|| Error::Input("`entries` must be an array of rows".into()))?;
    if list.len() != rows {
        return Err(Error::Dimension(format!(
            "{rows} rows declared, {} given",
            list.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in list.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Input(format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, {cols} declared",
                row.len()
            )));
        }
        for x in row {
            entries.push(
                json_int(x)
                    .ok_or_else(|| Error::Input(format!("row {i}: `{x}` is not an integer")))?,
            );
        }
    }
    IntMatrix::new(rows, cols, entries)
}

fn json_int(x: &Value) -> Option<BigInt> {
    match x {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

pub fn to_json(m: &IntMatrix) -> Value {
    let entries: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| match x.to_i64() {
                    Some(v) => json!(v),
                    None => json!(x.to_string()),
                })
                .collect()
        })
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn read_matrix(path: &Path) -> Result<IntMatrix> {
    let text = std::fs::read_to_string(path)?;
    if is_json(path) {
        parse_json(&text)
    } else {
        parse_text(&text)
    }
}

pub fn write_matrix(path: &Path, m: &IntMatrix) -> Result<()> {
    let text = if is_json(path) {
        serde_json::to_string_pretty(&to_json(m))? + "\n"
    } else {
        to_text(m)
    };
    std::fs::write(path, text)?;
    Ok(())
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub r: usize,
    pub k: usize,
    pub b: BigUint,
    pub b_bar: BigUint,
    pub expected: Option<BigUint>,
    /// `None` when no expectation was given.
    pub passed: Option<bool>,
}

pub fn verify_matrix(m: &IntMatrix, expected: Option<BigUint>) -> VerifyReport {
    let count = count_square_invertible(m);
    let passed = expected.as_ref().map(|e| *e == count.b);
    VerifyReport {
        r: count.r,
        k: count.k,
        b: count.b,
        b_bar: count.b_bar,
        expected,
        passed,
    }
}

pub fn verify_file(path: &Path, expected: Option<BigUint>) -> Result<VerifyReport> {
    Ok(verify_matrix(&read_matrix(path)?, expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = IntMatrix::from_rows(3, &[[1, 1, 1], [1, 2, 3], [1, 3, 6]]).unwrap();
        let text = to_text(&m);
        assert_eq!(text, "3 3\n1 1 1\n1 2 3\n1 3 6\n");
        assert_eq!(parse_text(&text).unwrap(), m);
        assert_eq!(parse_text("4 0\n\n\n\n\n").unwrap(), IntMatrix::zeros(4, 0));
    }

    #[test]
    fn text_errors() {
        assert!(matches!(parse_text(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_text("2 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_text("1 2\n1 2 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_text("1 2\n1 2\n3 4\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_text("x 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn json_round_trip_with_big_entries() {
        let mut m = IntMatrix::zeros(2, 2);
        m.set(0, 0, "123456789012345678901234567890".parse().unwrap());
        m.set(1, 1, BigInt::from(-7));
        let v = to_json(&m);
        assert_eq!(v["entries"][0][0], json!("123456789012345678901234567890"));
        assert_eq!(v["entries"][1][1], json!(-7));
        assert_eq!(parse_json(&v.to_string()).unwrap(), m);
    }

    #[test]
    fn json_errors() {
        assert!(parse_json(r#"{"rows": 1, "cols": 2, "entries": [[1]]}"#).is_err());
        assert!(parse_json(r#"{"rows": 2, "cols": 1, "entries": [[1]]}"#).is_err());
        assert!(parse_json(r#"{"rows": 1, "cols": 1, "entries": [[1.5]]}"#).is_err());
        assert!(parse_json(r#"{"cols": 1, "entries": []}"#).is_err());
        assert!(parse_json("not json").is_err());
    }

    #[test]
    fn verify_examples() {
        let m = IntMatrix::from_rows(3, &[[1, 1, 1], [1, 2, 3], [1, 3, 6]]).unwrap();
        let report = verify_matrix(&m, Some(20u32.into()));
        assert_eq!(report.passed, Some(true));
        let report = verify_matrix(&IntMatrix::zeros(4, 2), Some(1u32.into()));
        assert_eq!(report.passed, Some(true));
        assert_eq!(report.b_bar, 14u32.into());
        let m = IntMatrix::from_rows(2, &[[1, 1], [1, 1]]).unwrap();
        let report = verify_matrix(&m, Some(4u32.into()));
        assert_eq!(report.passed, Some(false));
        assert_eq!(report.b, 5u32.into());
        assert_eq!(verify_matrix(&m, None).passed, None);
    }
}
