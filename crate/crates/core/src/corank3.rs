//! Three-column matrices for every basis count except `(r, b) = (3, 11)`.
//!
//! A count `b` is built at the smallest row count `r'` that allows it and then
//! padded with zero rows, which changes nothing. At `r'` the route depends on
//! size: small counts use two columns plus a zero column, `r' <= 10` reads the
//! shipped table, `11 <= r' <= 48` assembles a block plan, and larger `r'`
//! samples a regular matrix from a binomial decomposition.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::binomial::binom;
use crate::corank2::build_corank2;
use crate::counting::count_square_invertible;
use crate::data::{self, TableEntry};
use crate::decomposition::{decompose_k3, plan_corank3_blocks, PLANNER_R};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::par::{self, Execution};
use crate::regular::{assemble_block_plan, sample_regular_matrix};

/// The range of `b` stored for each `r` in the shipped table.
pub fn table_window(r: usize) -> std::ops::RangeInclusive<u128> {
    let r = r as u64;
    if r == 3 {
        12..=20
    } else {
        binom(r + 2, 3).unwrap() + 1..=binom(r + 3, 3).unwrap()
    }
}

pub const TABLE_R: std::ops::RangeInclusive<usize> = 3..=10;

/// Explicit `r x 3` matrices keyed by `(r, b)` for `3 <= r <= 10`.
#[derive(Clone, Debug)]
pub struct AppendixATable {
    entries: BTreeMap<(usize, u128), IntMatrix>,
}

impl AppendixATable {
    /// Builds the table from one parsed file per `r`, checking shapes and that
    /// each window is covered exactly once.
    pub fn from_files(files: Vec<(usize, Vec<TableEntry>)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (r, file) in files {
            if !TABLE_R.contains(&r) {
                return Err(Error::Data(format!("no table file expected for r = {r}")));
            }
            let window = table_window(r);
            for TableEntry { b, matrix } in file {
                if matrix.rows() != r || matrix.cols() != 3 {
                    return Err(Error::Data(format!(
                        "entry (r = {r}, b = {b}) is {}x{}",
                        matrix.rows(),
                        matrix.cols()
                    )));
                }
                if !window.contains(&b) {
                    return Err(Error::Data(format!("b = {b} outside the r = {r} window")));
                }
                if entries.insert((r, b), matrix).is_some() {
                    return Err(Error::Data(format!("duplicate entry (r = {r}, b = {b})")));
                }
            }
        }
        for r in TABLE_R {
            if let Some(b) = table_window(r).find(|&b| !entries.contains_key(&(r, b))) {
                return Err(Error::Data(format!("missing entry (r = {r}, b = {b})")));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, r: usize, b: u128) -> Option<&IntMatrix> {
        self.entries.get(&(r, b))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, u128), &IntMatrix)> {
        self.entries.iter().map(|(&key, m)| (key, m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub r: usize,
    pub b: u128,
    pub counted: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub entries: usize,
    pub mismatches: Vec<Mismatch>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recounts every stored matrix.
pub fn selftest_appendix_a() -> Result<SelftestReport> {
    Ok(selftest_table(
        &data::assets()?.appendix_a,
        Execution::default(),
    ))
}

pub fn selftest_table(table: &AppendixATable, exec: Execution) -> SelftestReport {
    let items: Vec<_> = table.iter().collect();
    let entries = items.len();
    let mismatches = par::map(exec, items, |((r, b), m)| {
        let counted = count_square_invertible(m).bases();
        (counted != b).then_some(Mismatch { r, b, counted })
    })
    .into_iter()
    .flatten()
    .collect();
    SelftestReport {
        entries,
        mismatches,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Corank3Outcome {
    Constructed(IntMatrix),
    KnownNonexistent,
}

/// Smallest `r' >= 3` at which `b` is built, or `None` for `b = 11` at
/// `r = 3`, which no matrix realizes.
pub fn reduced_rows(r: usize, b: u128) -> Option<usize> {
    let mut rr = 3;
    while b > binom(rr as u64 + 3, 3).expect("b fits in u128") {
        rr += 1;
    }
    if rr == 3 && b == 11 {
        if r == 3 {
            return None;
        }
        // 11 <= C(6, 2): two columns in four rows suffice
        rr = 4;
    }
    Some(rr)
}

pub fn solve_corank3(r: usize, b: u128, seed: u64) -> Result<Corank3Outcome> {
    if r < 3 {
        return Err(Error::Input(format!(
            "three-column solver needs r >= 3, got {r}"
        )));
    }
    let max =
        binom(r as u64 + 3, 3).ok_or_else(|| Error::Input(format!("C({}, 3) overflows", r + 3)))?;
    if b == 0 || b > max {
        return Err(Error::Infeasible(format!(
            "an {r}x3 matrix has between 1 and {max} invertible square submatrices, not {b}"
        )));
    }
    let Some(rr) = reduced_rows(r, b) else {
        return Ok(Corank3Outcome::KnownNonexistent);
    };
    let m = build_at(rr, b, seed)?;
    let counted = count_square_invertible(&m).bases();
    if counted != b {
        return Err(Error::Construction(format!(
            "{rr}x3 matrix for b = {b} counts {counted}"
        )));
    }
    Ok(Corank3Outcome::Constructed(m.pad_rows(r)))
}

fn build_at(rr: usize, b: u128, seed: u64) -> Result<IntMatrix> {
    let r64 = rr as u64;
    if b <= binom(r64 + 2, 2).unwrap() {
        return Ok(build_corank2(rr, b)?.pad_cols(3));
    }
    if TABLE_R.contains(&rr) {
        return data::assets()?
            .appendix_a
            .get(rr, b)
            .cloned()
            .ok_or_else(|| Error::Data(format!("missing table entry (r = {rr}, b = {b})")));
    }
    let b_bar = binom(r64 + 3, 3).unwrap() - b;
    if PLANNER_R.contains(&rr) {
        assemble_block_plan(&plan_corank3_blocks(rr, b_bar)?, seed)
    } else {
        sample_regular_matrix(&decompose_k3(rr, b_bar)?.to_partition(), 3, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solved(r: usize, b: u128) -> IntMatrix {
        match solve_corank3(r, b, 0).unwrap() {
            Corank3Outcome::Constructed(m) => m,
            other => panic!("(r = {r}, b = {b}) gave {other:?}"),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(
            solved(3, 20),
            IntMatrix::from_rows(3, &[[1, 1, 1], [1, 2, 3], [1, 3, 6]]).unwrap()
        );
        assert_eq!(
            solve_corank3(3, 11, 0).unwrap(),
            Corank3Outcome::KnownNonexistent
        );
        let m = solved(7, 11);
        assert_eq!(m.rows(), 7);
        assert_eq!(count_square_invertible(&m).bases(), 11);
        assert!(matches!(solve_corank3(3, 21, 0), Err(Error::Infeasible(_))));
        assert!(matches!(solve_corank3(3, 0, 0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn reduction_rule() {
        assert_eq!(reduced_rows(3, 11), None);
        assert_eq!(reduced_rows(7, 11), Some(4));
        assert_eq!(reduced_rows(7, 20), Some(3));
        assert_eq!(reduced_rows(7, 21), Some(4));
        assert_eq!(reduced_rows(60, 287), Some(11));
        for r in 3..40 {
            for b in 1..=binom(r as u64 + 3, 3).unwrap() {
                if let Some(rr) = reduced_rows(r, b) {
                    assert!(rr <= r);
                }
            }
        }
    }

    #[test]
    fn table_windows_and_selftest() {
        let table = &data::assets().unwrap().appendix_a;
        assert_eq!(table.len(), 275);
        assert!(table.get(3, 11).is_none());
        let report = selftest_table(table, Execution::default());
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(table_window(4), 21..=35);
        assert_eq!(table_window(10), 221..=286);
    }

    #[test]
    fn every_route() {
        // two-column, table, planner and decomposition routes
        for (r, b) in [(12, 10), (12, 40), (12, 300), (30, 4000), (55, 28000)] {
            let m = solved(r, b);
            assert_eq!(count_square_invertible(&m).bases(), b);
        }
    }
}
