//! Top-level solver: an explicit witness for a linear matroid with `n`
//! elements, rank `r` and exactly `b` bases, when one can be constructed.
//!
//! The witness is the `r x (n - r)` block `M` of `A = (I_r | M)`. Since `M` and
//! its transpose have the same count, the solver works with the taller
//! orientation `R x kappa`, `R = max(r, k)`, and transposes back at the end.

use serde::Serialize;

use crate::binomial::binom;
use crate::corank2::{build_corank0, build_corank1, build_corank2};
use crate::corank3::{solve_corank3, Corank3Outcome};
use crate::counting::{count_square_invertible, standard_representation};
use crate::decomposition::{greedy_decompose_general, GreedyOutcome};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::par::{self, Execution};
use crate::regular::sample_regular_matrix;

/// Largest witness the solver will allocate, in entries.
pub const MAX_WITNESS_ENTRIES: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    pub r: u64,
    pub b: u128,
    /// `r x (n - r)`.
    pub matrix: IntMatrix,
    pub verified: bool,
    pub seed: u64,
}

impl Witness {
    /// `(I_r | M)`.
    pub fn full_matrix(&self) -> IntMatrix {
        standard_representation(&self.matrix)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SolveOutcome {
    Constructed(Witness),
    /// Only `(6, 3, 11)`: no matroid of that shape has 11 bases.
    KnownNonexistent,
    /// Outside the range the constructions cover; existence is not decided.
    Unknown(String),
}

impl SolveOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            SolveOutcome::Constructed(_) => "CONSTRUCTED",
            SolveOutcome::KnownNonexistent => "KNOWN_NONEXISTENT",
            SolveOutcome::Unknown(_) => "UNKNOWN",
        }
    }
}

pub fn solve(n: u64, r: u64, b: u128, seed: u64) -> Result<SolveOutcome> {
    if r == 0 || r > n {
        return Err(Error::Input(format!(
            "need 0 < r <= n, got n = {n}, r = {r}"
        )));
    }
    let total = binom(n, r)
        .ok_or_else(|| Error::Input(format!("C({n}, {r}) exceeds the supported range")))?;
    if b == 0 || b > total {
        return Err(Error::Input(format!(
            "need 1 <= b <= C({n}, {r}) = {total}, got {b}"
        )));
    }
    let k = n - r;
    if r.saturating_mul(k) > MAX_WITNESS_ENTRIES {
        return Err(Error::Input(format!(
            "a {r}x{k} witness exceeds {MAX_WITNESS_ENTRIES} entries"
        )));
    }
    let (big_r, kappa) = (r.max(k) as usize, r.min(k) as usize);
    let transposed = k > r;

    let m = match build(big_r, kappa, b, seed)? {
        Built::Matrix(m) => {
            let counted = count_square_invertible(&m).bases();
            if counted != b {
                return Err(Error::Construction(format!(
                    "{big_r}x{kappa} witness for b = {b} counts {counted}"
                )));
            }
            m
        }
        Built::Counted(m) => m,
        Built::Nonexistent => return Ok(SolveOutcome::KnownNonexistent),
        Built::Unknown(why) => return Ok(SolveOutcome::Unknown(why)),
    };
    let matrix = if transposed { m.transpose() } else { m };
    Ok(SolveOutcome::Constructed(Witness {
        n,
        r,
        b,
        matrix,
        verified: true,
        seed,
    }))
}

enum Built {
    Matrix(IntMatrix),
    /// Already accepted on an exact count of `b`; recounting a large witness
    /// would double the cost.
    Counted(IntMatrix),
    Nonexistent,
    Unknown(String),
}

fn build(big_r: usize, kappa: usize, b: u128, seed: u64) -> Result<Built> {
    let c = |m: usize| binom((big_r + m) as u64, m as u64).unwrap_or(u128::MAX);
    if (big_r, kappa, b) == (3, 3, 11) {
        return Ok(Built::Nonexistent);
    }
    let m = if kappa == 0 {
        build_corank0(big_r, b)?
    } else if b <= c(1) {
        build_corank1(big_r, b)?.pad_cols(kappa)
    } else if kappa >= 2 && b <= c(2) {
        build_corank2(big_r, b)?.pad_cols(kappa)
    } else if kappa >= 3 && b <= c(3) {
        match solve_corank3(big_r, b, seed)? {
            Corank3Outcome::Constructed(m) => m.pad_cols(kappa),
            Corank3Outcome::KnownNonexistent => return Ok(Built::Nonexistent),
        }
    } else {
        let b_bar = c(kappa) - b;
        match greedy_decompose_general(kappa, big_r, b_bar) {
            GreedyOutcome::Feasible(d) => {
                return Ok(Built::Counted(sample_regular_matrix(
                    &d.to_partition(),
                    kappa,
                    seed,
                )?))
            }
            GreedyOutcome::Infeasible { rows_needed } => {
                return Ok(Built::Unknown(format!(
                    "outside constructive range: the greedy decomposition of {b_bar} \
                     singular minors needs {rows_needed} rows, {big_r} available"
                )))
            }
        }
    };
    Ok(Built::Matrix(m))
}

/// Default limit on the number of `b` values `table` will sweep.
pub const DEFAULT_TABLE_CAP: u128 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub b: u128,
    pub tag: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Solves `(n, r, b)` for every `b` in `1..=C(n, r)`, in order of `b`.
pub fn table(n: u64, r: u64, cap: u128, seed: u64) -> Result<Vec<TableRow>> {
    table_with(n, r, cap, seed, Execution::default())
}

pub fn table_with(n: u64, r: u64, cap: u128, seed: u64, exec: Execution) -> Result<Vec<TableRow>> {
    if r == 0 || r > n {
        return Err(Error::Input(format!(
            "need 0 < r <= n, got n = {n}, r = {r}"
        )));
    }
    let total = binom(n, r)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::Input(format!("C({n}, {r}) exceeds the cap of {cap} cells")))?;
    let bs: Vec<u128> = (1..=total).collect();
    Ok(par::map(exec, bs, |b| match solve(n, r, b, seed) {
        Ok(SolveOutcome::Constructed(w)) => TableRow {
            b,
            tag: "CONSTRUCTED",
            rows: w.matrix.rows(),
            cols: w.matrix.cols(),
            verified: w.verified,
            note: None,
        },
        Ok(other) => TableRow {
            b,
            tag: other.tag(),
            rows: 0,
            cols: 0,
            verified: false,
            note: match other {
                SolveOutcome::Unknown(why) => Some(why),
                _ => None,
            },
        },
        Err(e) => TableRow {
            b,
            tag: "FAILED",
            rows: 0,
            cols: 0,
            verified: false,
            note: Some(e.to_string()),
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_bases_direct;

    fn witness(n: u64, r: u64, b: u128) -> Witness {
        match solve(n, r, b, 0).unwrap() {
            SolveOutcome::Constructed(w) => w,
            other => panic!("({n}, {r}, {b}) gave {other:?}"),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(solve(6, 3, 11, 0).unwrap(), SolveOutcome::KnownNonexistent);
        let w = witness(5, 5, 1);
        assert_eq!((w.matrix.rows(), w.matrix.cols()), (5, 0));
        let w = witness(10, 3, 86);
        assert_eq!((w.matrix.rows(), w.matrix.cols()), (3, 7));
        assert!(w.verified);
        assert_eq!(count_bases_direct(&w.full_matrix()).unwrap(), 86u32.into());
    }

    #[test]
    fn input_errors() {
        assert!(matches!(solve(5, 0, 1, 0), Err(Error::Input(_))));
        assert!(matches!(solve(5, 6, 1, 0), Err(Error::Input(_))));
        assert!(matches!(solve(5, 2, 11, 0), Err(Error::Input(_))));
        assert!(matches!(solve(5, 2, 0, 0), Err(Error::Input(_))));
        assert!(matches!(solve(300, 150, 1, 0), Err(Error::Input(_))));
    }

    #[test]
    fn general_k_feasible_and_unknown() {
        // b_bar = 15 in 120 rows: fifteen 4-row blocks
        let total = binom(124, 4).unwrap();
        let w = witness(124, 120, total - 15);
        assert_eq!(count_square_invertible(&w.matrix).singular(), Some(15));
        // b_bar = 15 in 40 rows needs 60 rows
        let total = binom(44, 4).unwrap();
        assert!(matches!(
            solve(44, 40, total - 15, 0).unwrap(),
            SolveOutcome::Unknown(_)
        ));
    }

    #[test]
    fn small_tables() {
        let rows = table(6, 3, DEFAULT_TABLE_CAP, 0).unwrap();
        assert_eq!(rows.len(), 20);
        for row in &rows {
            if row.b == 11 {
                assert_eq!(row.tag, "KNOWN_NONEXISTENT");
            } else {
                assert_eq!(row.tag, "CONSTRUCTED");
                assert!(row.verified);
            }
        }
        let rows = table(4, 4, DEFAULT_TABLE_CAP, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].tag, "CONSTRUCTED");
        assert!(table(40, 20, DEFAULT_TABLE_CAP, 0).is_err());
        assert!(table(6, 3, 19, 0).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            solve(30, 25, 40_000, 7).unwrap(),
            solve(30, 25, 40_000, 7).unwrap()
        );
    }
}
