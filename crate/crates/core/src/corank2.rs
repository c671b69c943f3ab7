//! Matrices with at most two columns, for every feasible basis count.
//!
//! A two-column matrix whose first column is `s` ones and whose second column
//! takes value `i` exactly `a_i` times has `1 + 2s + sum_{i<j} a_i a_j`
//! invertible square submatrices. Choosing the multiplicities reduces to the
//! sum-of-squares problem solved by [`solve_sum_of_squares`]; the handful of
//! counts it cannot reach come from a shipped table of stubs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binomial::binom;
use crate::counting::count_square_invertible;
use crate::data::{self, TableEntry};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Nonnegative `a` of length `s` with `sum a = s` and `sum a^2 = s + 2c`,
/// stored in nonincreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquaresSolution {
    pub s: u64,
    pub c: u64,
    pub a: Vec<u64>,
}

impl SquaresSolution {
    pub fn is_valid(&self) -> bool {
        let sum: u64 = self.a.iter().sum();
        let sq: u64 = self.a.iter().map(|x| x * x).sum();
        self.a.len() as u64 == self.s && sum == self.s && sq == self.s + 2 * self.c
    }
}

/// Largest search size handled by exhaustive search; above it the solver
/// peels off one part at a time.
const SEARCH_LIMIT: u64 = 32;

pub fn solve_sum_of_squares(s: u64, c: u64) -> Result<SquaresSolution> {
    if s < 5 || 4 * c > s * s - 5 * s {
        return Err(Error::Range(format!(
            "sum of squares needs s >= 5 and 0 <= c <= (s^2 - 5s)/4, got s = {s}, c = {c}"
        )));
    }
    let mut a = solve_rec(s, c)?;
    a.sort_unstable_by(|x, y| y.cmp(x));
    let sol = SquaresSolution { s, c, a };
    debug_assert!(sol.is_valid());
    Ok(sol)
}

fn solve_rec(s: u64, c: u64) -> Result<Vec<u64>> {
    if s <= SEARCH_LIMIT {
        let mut parts = Vec::new();
        if search(s, s + 2 * c, s, &mut parts) {
            parts.resize(s as usize, 0);
            return Ok(parts);
        }
        return Err(Error::Construction(format!(
            "no sum-of-squares solution for s = {s}, c = {c}"
        )));
    }
    // smallest t leaving a subproblem inside the valid range
    let s_i = s as i128;
    let c_i = c as i128;
    let t = (1..=s - 5)
        .find(|&t| {
            let t_i = t as i128;
            (t_i * t_i - t_i) / 2 <= c_i
                && 4 * c_i <= 3 * t_i * t_i - 2 * s_i * t_i + 3 * t_i + s_i * s_i - 5 * s_i
        })
        .ok_or_else(|| {
            Error::Construction(format!("no split for sum of squares at s = {s}, c = {c}"))
        })?;
    let mut a = solve_rec(s - t, c - (t * t - t) / 2)?;
    a.push(t);
    a.extend(std::iter::repeat_n(0, t as usize - 1));
    Ok(a)
}

/// Nonincreasing positive parts, each at most `max`, with the given sum and
/// sum of squares.
fn search(sum: u64, squares: u64, max: u64, parts: &mut Vec<u64>) -> bool {
    if sum == 0 {
        return squares == 0;
    }
    // the squares lie between spreading `sum` into ones and packing it into
    // parts of size `max`
    let (q, rem) = (sum / max, sum % max);
    if squares < sum || squares > q * max * max + rem * rem {
        return false;
    }
    for p in (1..=max.min(sum)).rev() {
        if p * p > squares {
            continue;
        }
        parts.push(p);
        if search(sum - p, squares - p * p, p, parts) {
            return true;
        }
        parts.pop();
    }
    false
}

/// The `b` values of two-column matrices that the sum-of-squares
/// construction misses.
pub fn is_corank2_exception(b: u128) -> bool {
    matches!(b, 1..=20 | 22..=26 | 29..=32 | 37..=38)
}

/// Explicit stubs for the exceptional counts, keyed by `b`. A stub with `m`
/// rows has exactly `b` invertible square submatrices, and so does any zero
/// padding of it.
#[derive(Clone, Debug)]
pub struct Corank2ExceptionTable {
    stubs: BTreeMap<u128, IntMatrix>,
}

impl Corank2ExceptionTable {
    pub fn from_entries(entries: Vec<TableEntry>) -> Result<Self> {
        let mut stubs = BTreeMap::new();
        for TableEntry { b, matrix } in entries {
            if !is_corank2_exception(b) {
                return Err(Error::Data(format!("b = {b} is not an exceptional count")));
            }
            if matrix.rows() > 8 {
                return Err(Error::Data(format!(
                    "stub for b = {b} has {} rows, at most 8 allowed",
                    matrix.rows()
                )));
            }
            let got = count_square_invertible(&matrix).bases();
            if got != b {
                return Err(Error::Data(format!("stub for b = {b} counts {got}")));
            }
            if stubs.insert(b, matrix).is_some() {
                return Err(Error::Data(format!("duplicate stub for b = {b}")));
            }
        }
        if let Some(b) = (1..=38).find(|&b| is_corank2_exception(b) && !stubs.contains_key(&b)) {
            return Err(Error::Data(format!("missing stub for b = {b}")));
        }
        Ok(Self { stubs })
    }

    pub fn get(&self, b: u128) -> Option<&IntMatrix> {
        self.stubs.get(&b)
    }

    pub fn len(&self) -> usize {
        self.stubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stubs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u128, &IntMatrix)> {
        self.stubs.iter().map(|(&b, m)| (b, m))
    }
}

fn check_range(r: usize, k: u64, b: u128) -> Result<()> {
    let max = binom(r as u64 + k, k).expect("corank at most 2 fits");
    if b == 0 || b > max {
        return Err(Error::Infeasible(format!(
            "an {r}x{k} matrix has between 1 and {max} invertible square submatrices, not {b}"
        )));
    }
    Ok(())
}

pub fn build_corank0(r: usize, b: u128) -> Result<IntMatrix> {
    check_range(r, 0, b)?;
    Ok(IntMatrix::zeros(r, 0))
}

/// `b - 1` ones followed by zeros.
pub fn build_corank1(r: usize, b: u128) -> Result<IntMatrix> {
    check_range(r, 1, b)?;
    let mut m = IntMatrix::zeros(r, 1);
    for i in 0..(b - 1) as usize {
        m.set(i, 0, BigInt::from(1));
    }
    Ok(m)
}

/// Smallest `s >= 5` whose interval `[ceil((s^2+11s+4)/4), (s^2+3s+2)/2]`
/// contains `b`.
pub fn corank2_block_size(b: u128) -> Option<u64> {
    let mut s: u128 = 5;
    loop {
        let lo = (s * s + 11 * s + 4).div_ceil(4);
        let hi = (s * s + 3 * s + 2) / 2;
        if lo > b {
            return None;
        }
        if b <= hi {
            return Some(s as u64);
        }
        s += 1;
    }
}

pub fn build_corank2(r: usize, b: u128) -> Result<IntMatrix> {
    check_range(r, 2, b)?;
    if is_corank2_exception(b) {
        let stub = data::assets()?
            .corank2
            .get(b)
            .ok_or_else(|| Error::Data(format!("missing stub for b = {b}")))?;
        if stub.rows() > r {
            return Err(Error::Construction(format!(
                "stub for b = {b} needs {} rows, only {r} available",
                stub.rows()
            )));
        }
        return Ok(stub.pad_rows(r));
    }
    let s = corank2_block_size(b)
        .ok_or_else(|| Error::Construction(format!("no block size covers b = {b}")))?;
    if s as usize > r {
        return Err(Error::Construction(format!(
            "block size {s} for b = {b} exceeds {r} rows"
        )));
    }
    let c = binom(s + 2, 2).expect("s <= r") - b;
    let sol = solve_sum_of_squares(s, c as u64)?;
    let mut m = IntMatrix::zeros(r, 2);
    let mut row = 0;
    // multiplicities are nonincreasing, so value 1 is the most repeated
    for (value, &mult) in sol.a.iter().take_while(|&&m| m > 0).enumerate() {
        for _ in 0..mult {
            m.set(row, 0, BigInt::from(1));
            m.set(row, 1, BigInt::from(value + 1));
            row += 1;
        }
    }
    Ok(m)
}
