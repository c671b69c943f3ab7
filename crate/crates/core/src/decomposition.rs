//! Binomial decompositions of singular-minor targets and the block plans
//! built from them.
//!
//! Three procedures live here, each kept apart from the others:
//!
//! * [`greedy_decompose_general`]: one block at a time, largest first, down to
//!   a threshold `C(K, k)`, then blocks of size `k` for the remainder;
//! * [`decompose_k3`]: for three columns, every size from `r` down to 3 takes
//!   as many copies as fit;
//! * [`plan_corank3_blocks`]: for three columns and `11 <= r <= 48`, duplicated
//!   rows absorb most of the target and a fixed table covers the rest.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::binomial::binom;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::regular::{BlockPlan, BlockSpec, RegularPartition, ZeroPair};

/// Block sizes `s -> a_s` with `sum a_s C(s, k) = b_bar`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub k: usize,
    pub r: usize,
    pub a: BTreeMap<usize, u64>,
    pub b_bar: u128,
}

impl Decomposition {
    fn from_parts(k: usize, r: usize, a: BTreeMap<usize, u64>, b_bar: u128) -> Self {
        let a = a.into_iter().filter(|&(_, n)| n > 0).collect();
        Self { k, r, a, b_bar }
    }

    pub fn rows(&self) -> u128 {
        self.a.iter().map(|(&s, &n)| s as u128 * n as u128).sum()
    }

    pub fn singular_count(&self) -> Option<u128> {
        self.a.iter().try_fold(0u128, |acc, (&s, &n)| {
            acc.checked_add(binom(s as u64, self.k as u64)?.checked_mul(n as u128)?)
        })
    }

    /// Both defining conditions: the sizes sum to the target and fit in `r` rows.
    pub fn is_valid(&self) -> bool {
        self.a.keys().all(|&s| s >= self.k)
            && self.singular_count() == Some(self.b_bar)
            && self.rows() <= self.r as u128
    }

    /// Largest blocks first, unused rows as generic padding.
    pub fn to_partition(&self) -> RegularPartition {
        let mut blocks = Vec::new();
        for (&s, &n) in self.a.iter().rev() {
            blocks.extend(std::iter::repeat_n(s, n as usize));
        }
        RegularPartition::new(self.r - self.rows() as usize, blocks)
    }
}

/// The integer threshold `K = ceil((k^{1/k} + 1)^k + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyConfig {
    pub k: usize,
    #[serde(rename = "K")]
    pub big_k: u64,
}

impl GreedyConfig {
    pub fn new(k: usize) -> Self {
        let big_k = certified_ceil_power(k as u32) + 1;
        debug_assert!(big_k > 2 * k as u64);
        Self { k, big_k }
    }

    pub fn threshold(&self) -> u128 {
        binom(self.big_k, self.k as u64).expect("threshold fits for practical k")
    }
}

/// `ceil((k^{1/k} + 1)^k)`, from rational bounds `x/D <= k^{1/k} < (x+1)/D`
/// tightened until both ends round up to the same integer.
fn certified_ceil_power(k: u32) -> u64 {
    assert!(k >= 1);
    let kb = BigUint::from(k);
    let mut bits = 16u32;
    loop {
        let d = BigUint::one() << bits;
        let dk = d.pow(k);
        let x = (&kb * &dk).nth_root(k);
        let ceil_div = |n: BigUint| (n + &dk - 1u32) / &dk;
        let lo = ceil_div((&x + &d).pow(k));
        if x.pow(k) == &kb * &dk {
            return lo.to_u64().expect("small");
        }
        let hi = ceil_div((&x + &d + 1u32).pow(k));
        if lo == hi {
            return lo.to_u64().expect("small");
        }
        bits += 16;
    }
}

/// Largest `s >= k` with `C(s, k) <= v`, assuming `v >= 1`.
fn largest_block(k: usize, v: u128) -> usize {
    let fits = |s: usize| binom(s as u64, k as u64).is_some_and(|c| c <= v);
    let mut lo = k;
    let mut hi = k.max(1) * 2;
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    // fits(lo), !fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GreedyOutcome {
    Feasible(Decomposition),
    /// The procedure's blocks need more rows than the budget allows.
    Infeasible {
        rows_needed: u128,
    },
}

pub fn greedy_decompose_general(k: usize, r: usize, b_bar: u128) -> GreedyOutcome {
    assert!(k >= 1, "greedy decomposition needs k >= 1");
    let threshold = GreedyConfig::new(k).threshold();
    let mut a = BTreeMap::new();
    let mut rem = b_bar;
    while rem >= threshold {
        let s = largest_block(k, rem);
        *a.entry(s).or_insert(0u64) += 1;
        rem -= binom(s as u64, k as u64).expect("fits below rem");
    }
    if rem > 0 {
        let Ok(n) = u64::try_from(rem) else {
            return GreedyOutcome::Infeasible {
                rows_needed: u128::MAX,
            };
        };
        *a.entry(k).or_insert(0) += n;
    }
    let d = Decomposition::from_parts(k, r, a, b_bar);
    let rows = d.rows();
    if rows <= r as u128 {
        GreedyOutcome::Feasible(d)
    } else {
        GreedyOutcome::Infeasible { rows_needed: rows }
    }
}

/// For every `s` from `r` down to 3, `a_s = rem / C(s, 3)` and `rem %= C(s, 3)`.
pub fn appendix_b_greedy(r: usize, b_bar: u128) -> BTreeMap<usize, u64> {
    let mut a = BTreeMap::new();
    let mut rem = b_bar;
    for s in (3..=r).rev() {
        let c = binom(s as u64, 3).expect("r is practical");
        if rem >= c {
            a.insert(s, (rem / c) as u64);
            rem %= c;
        }
    }
    debug_assert_eq!(rem, 0, "C(3, 3) = 1 absorbs every remainder");
    a
}

fn check_k3_range(r: usize, b_bar: u128) -> Result<()> {
    let max = binom(r as u64 + 2, 2).expect("practical r");
    if r < 3 || b_bar > max {
        return Err(Error::Range(format!(
            "three-column decomposition needs r >= 3 and b_bar <= {max}, got r = {r}, b_bar = {b_bar}"
        )));
    }
    Ok(())
}

/// Smallest budget at which the split below is attempted.
pub const K3_SPLIT_MIN_R: usize = 204;

pub fn decompose_k3(r: usize, b_bar: u128) -> Result<Decomposition> {
    check_k3_range(r, b_bar)?;
    let d = Decomposition::from_parts(3, r, appendix_b_greedy(r, b_bar), b_bar);
    if d.rows() <= r as u128 {
        return Ok(d);
    }
    if r >= K3_SPLIT_MIN_R {
        // one block of the largest size s0, and the rest in s0 - 2 rows
        let s0 = largest_block(3, b_bar);
        let rest = decompose_k3(s0 - 2, b_bar - binom(s0 as u64, 3).expect("s0 is small"))?;
        let mut a = rest.a;
        *a.entry(s0).or_insert(0) += 1;
        let d = Decomposition::from_parts(3, r, a, b_bar);
        if d.rows() <= r as u128 {
            return Ok(d);
        }
    }
    Err(Error::Infeasible(format!(
        "no three-column decomposition of b_bar = {b_bar} within {r} rows"
    )))
}

/// Summand of the residual table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Residual {
    /// `C(s + 2, 3)` from a block with one zero coordinate.
    T2(usize),
    /// `C(s + 1, 3)` from a block sharing two coordinates.
    T1(usize),
}

impl Residual {
    pub fn value(self) -> u128 {
        match self {
            Residual::T2(s) => binom(s as u64 + 2, 3).unwrap(),
            Residual::T1(s) => binom(s as u64 + 1, 3).unwrap(),
        }
    }

    pub fn rows(self) -> usize {
        match self {
            Residual::T2(s) | Residual::T1(s) => s,
        }
    }
}

use Residual::{T1, T2};

/// Row cost of the residual table entry for each `v` in `0..=48`.
pub const LENG: [usize; 49] = [
    0, 1, 2, 3, 2, 3, 4, 6, 4, 5, 3, 4, 5, 7, 5, 6, 8, 10, 7, 9, 4, 5, 6, 8, 6, 7, 9, 11, 8, 10, 7,
    8, 10, 12, 9, 5, 6, 7, 9, 7, 8, 10, 12, 9, 11, 8, 9, 11, 13,
];

const RESIDUALS: [&[Residual]; 48] = [
    &[T2(1)],
    &[T2(1), T2(1)],
    &[T2(1), T2(1), T2(1)],
    &[T2(2)],
    &[T2(2), T2(1)],
    &[T2(2), T2(1), T2(1)],
    &[T2(2), T2(1), T2(1), T1(2)],
    &[T2(2), T2(2)],
    &[T2(2), T2(2), T2(1)],
    &[T2(3)],
    &[T2(3), T2(1)],
    &[T2(3), T2(1), T2(1)],
    &[T2(3), T2(1), T2(1), T1(2)],
    &[T2(3), T2(2)],
    &[T2(3), T2(2), T2(1)],
    &[T2(3), T2(2), T2(1), T1(2)],
    &[T2(3), T2(2), T2(1), T1(2), T1(2)],
    &[T2(3), T2(2), T2(2)],
    &[T2(3), T2(2), T2(2), T1(2)],
    &[T2(4)],
    &[T2(4), T2(1)],
    &[T2(4), T2(1), T2(1)],
    &[T2(4), T2(1), T2(1), T1(2)],
    &[T2(4), T2(2)],
    &[T2(4), T2(2), T2(1)],
    &[T2(4), T2(2), T2(1), T1(2)],
    &[T2(4), T2(2), T2(1), T1(2), T1(2)],
    &[T2(4), T2(2), T2(2)],
    &[T2(4), T2(2), T2(2), T1(2)],
    &[T2(4), T2(3)],
    &[T2(4), T2(3), T2(1)],
    &[T2(4), T2(3), T2(1), T1(2)],
    &[T2(4), T2(3), T2(1), T1(2), T1(2)],
    &[T2(4), T2(3), T2(2)],
    &[T2(5)],
    &[T2(5), T2(1)],
    &[T2(5), T2(1), T2(1)],
    &[T2(5), T2(1), T2(1), T1(2)],
    &[T2(5), T2(2)],
    &[T2(5), T2(2), T2(1)],
    &[T2(5), T2(2), T2(1), T1(2)],
    &[T2(5), T2(2), T2(1), T1(2), T1(2)],
    &[T2(5), T2(2), T2(2)],
    &[T2(5), T2(2), T2(2), T1(2)],
    &[T2(5), T2(3)],
    &[T2(5), T2(3), T2(1)],
    &[T2(5), T2(3), T2(1), T1(2)],
    &[T2(5), T2(3), T2(1), T1(2), T1(2)],
];

/// Sums of modified-block contributions for each residual `v` in `1..=48`.
pub struct ResidualPartitionTable;

impl ResidualPartitionTable {
    pub const MAX: u128 = 48;

    pub fn entry(v: u128) -> Option<&'static [Residual]> {
        match v {
            0 => Some(&[]),
            1..=48 => Some(RESIDUALS[v as usize - 1]),
            _ => None,
        }
    }

    pub fn leng(v: u128) -> Option<usize> {
        LENG.get(usize::try_from(v).ok()?).copied()
    }
}

/// `C(t, 3) + C(t, 2)(r - t + 3)` for `t = 0..=r`, the singular minors added by
/// `t` copies of one row in `r` rows. Increasing in `t` for `t >= 2`.
pub fn duplicate_costs(r: usize) -> Vec<u128> {
    (0..=r)
        .map(|t| {
            let (t64, r64) = (t as u64, r as u64);
            binom(t64, 3).unwrap() + binom(t64, 2).unwrap() * (r64 + 3 - t64) as u128
        })
        .collect()
}

/// Duplicate-block multiplicities `t -> a_t` and the residual below `r + 1`.
fn duplicate_greedy(r: usize, b_bar: u128, costs: &[u128]) -> (BTreeMap<usize, u64>, u128) {
    let mut a = BTreeMap::new();
    let mut rem = b_bar;
    for t in (2..=r).rev() {
        if rem >= costs[t] {
            a.insert(t, (rem / costs[t]) as u64);
            rem %= costs[t];
        }
    }
    (a, rem)
}

pub const PLANNER_R: std::ops::RangeInclusive<usize> = 11..=48;

pub fn plan_corank3_blocks(r: usize, b_bar: u128) -> Result<BlockPlan> {
    if !PLANNER_R.contains(&r) {
        return Err(Error::Range(format!(
            "planner covers 11 <= r <= 48, got {r}"
        )));
    }
    check_k3_range(r, b_bar)?;
    let (dups, residual) = duplicate_greedy(r, b_bar, &duplicate_costs(r));
    let mut blocks = Vec::new();
    for (&t, &n) in dups.iter().rev() {
        blocks.extend(std::iter::repeat_n(BlockSpec::Type3(t), n as usize));
    }
    let entry = ResidualPartitionTable::entry(residual)
        .expect("the duplicate greedy leaves at most r <= 48");
    let mut pairs = ZeroPair::ALL.iter();
    for &summand in entry {
        blocks.push(match summand {
            T2(s) => BlockSpec::Type2 {
                s,
                pair: *pairs.next().expect("at most three T2 summands"),
            },
            T1(s) => BlockSpec::Type1(s),
        });
    }
    let plan = BlockPlan::padded(blocks, r, 3).map_err(|_| {
        Error::Infeasible(format!("block plan for b_bar = {b_bar} exceeds {r} rows"))
    })?;
    debug_assert_eq!(plan.target_b_bar(), b_bar);
    Ok(plan)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub r: usize,
    pub b_bar: u128,
    pub rows: u128,
}

/// Worst row count over every target at one `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowSummary {
    pub r: usize,
    pub max_rows: u128,
    pub argmax_b_bar: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub name: String,
    pub r_range: (usize, usize),
    pub cells: u64,
    pub per_r: Vec<RowSummary>,
    pub violations: Vec<Violation>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const APPENDIX_B_R: std::ops::RangeInclusive<usize> = 49..=203;

/// Rows used by the three-column greedy at `(r, b_bar)`.
pub fn appendix_b_rows(r: usize, b_bar: u128) -> u128 {
    appendix_b_greedy(r, b_bar)
        .iter()
        .map(|(&s, &n)| s as u128 * n as u128)
        .sum()
}

/// Reruns the three-column greedy on every `b_bar` in `0..=C(r+2, 2)` for
/// `49 <= r <= 203`; every cell using more than `r` rows is a violation.
pub fn replay_appendix_b() -> ReplayReport {
    replay_appendix_b_with(Execution::default())
}

pub fn replay_appendix_b_with(exec: Execution) -> ReplayReport {
    let rs: Vec<usize> = APPENDIX_B_R.collect();
    let results = par::map(exec, rs, |r| {
        let top = binom(r as u64 + 2, 2).unwrap();
        let mut summary = RowSummary {
            r,
            max_rows: 0,
            argmax_b_bar: 0,
        };
        let mut bad = Vec::new();
        for b_bar in 0..=top {
            let rows = appendix_b_rows(r, b_bar);
            if rows > summary.max_rows {
                summary.max_rows = rows;
                summary.argmax_b_bar = b_bar;
            }
            if rows > r as u128 {
                bad.push(Violation { r, b_bar, rows });
            }
        }
        (summary, bad, top as u64 + 1)
    });
    collect_report("appendix-b", APPENDIX_B_R, results)
}

/// Row cost of the planner at `(r, b_bar)`: duplicated rows plus the residual
/// table's rows.
pub fn appendix_c_rows(r: usize, b_bar: u128) -> u128 {
    let (dups, residual) = duplicate_greedy(r, b_bar, &duplicate_costs(r));
    planner_rows(&dups, residual)
}

fn planner_rows(dups: &BTreeMap<usize, u64>, residual: u128) -> u128 {
    let dup_rows: u128 = dups.iter().map(|(&t, &n)| t as u128 * n as u128).sum();
    dup_rows + ResidualPartitionTable::leng(residual).expect("residual at most 48") as u128
}

/// Reruns the planner's row count on every `b_bar` in `1..=C(r+2, 2)` for
/// `11 <= r <= 48`; an `r` whose worst cell exceeds `r` rows is a violation.
pub fn replay_appendix_c() -> ReplayReport {
    replay_appendix_c_with(Execution::default())
}

pub fn replay_appendix_c_with(exec: Execution) -> ReplayReport {
    let rs: Vec<usize> = PLANNER_R.collect();
    let results = par::map(exec, rs, |r| {
        let costs = duplicate_costs(r);
        let top = binom(r as u64 + 2, 2).unwrap();
        let mut summary = RowSummary {
            r,
            max_rows: 0,
            argmax_b_bar: 0,
        };
        for b_bar in 1..=top {
            let (dups, residual) = duplicate_greedy(r, b_bar, &costs);
            let rows = planner_rows(&dups, residual);
            if rows > summary.max_rows {
                summary.max_rows = rows;
                summary.argmax_b_bar = b_bar;
            }
        }
        let bad = if summary.max_rows > r as u128 {
            vec![Violation {
                r,
                b_bar: summary.argmax_b_bar,
                rows: summary.max_rows,
            }]
        } else {
            vec![]
        };
        (summary, bad, top as u64)
    });
    collect_report("appendix-c", PLANNER_R, results)
}

fn collect_report(
    name: &str,
    range: std::ops::RangeInclusive<usize>,
    results: Vec<(RowSummary, Vec<Violation>, u64)>,
) -> ReplayReport {
    let mut report = ReplayReport {
        name: name.to_string(),
        r_range: (*range.start(), *range.end()),
        cells: 0,
        per_r: Vec::new(),
        violations: Vec::new(),
    };
    for (summary, bad, cells) in results {
        report.cells += cells;
        report.per_r.push(summary);
        report.violations.extend(bad);
    }
    report
}
