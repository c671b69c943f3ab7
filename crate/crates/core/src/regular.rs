//! Integer matrices whose singular square submatrices are prescribed.
//!
//! A plan is a list of row blocks. Regular blocks put their rows on distinct
//! hyperplanes with Vandermonde normals, so the only singular minors are the
//! full-width ones inside a block. For three columns there are also three
//! modified blocks (see [`BlockSpec`]) that trade rows for extra singular
//! minors. Rows are drawn at random from a window `[1, W]`, a row creating an
//! unintended singular minor of order at most three is redrawn on the spot,
//! and the finished matrix is recounted exactly. A mismatch discards it and
//! doubles `W`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binomial::binom;
use crate::combinations::Combinations;
use crate::counting::count_square_invertible;
use crate::error::{Error, Result};
use crate::linalg::{determinant, submatrix, IntMatrix};

pub const BASE_WINDOW: i64 = 64;
pub const MAX_RETRIES: u32 = 8;
const ROW_TRIES: u32 = 256;

/// Normals `(1, t, t^2, ..., t^{k-1})` for `t = 1..=count`.
pub fn hyperplane_normals(count: usize, k: usize) -> Vec<Vec<BigInt>> {
    (1..=count)
        .map(|t| {
            let t = BigInt::from(t);
            let mut v = Vec::with_capacity(k);
            let mut p = BigInt::from(1);
            for _ in 0..k {
                v.push(p.clone());
                p *= &t;
            }
            v
        })
        .collect()
}

/// Which two coordinates stay nonzero in a [`BlockSpec::Type2`] block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ZeroPair {
    #[serde(rename = "12")]
    P12,
    #[serde(rename = "13")]
    P13,
    #[serde(rename = "23")]
    P23,
}

impl ZeroPair {
    pub const ALL: [ZeroPair; 3] = [ZeroPair::P12, ZeroPair::P13, ZeroPair::P23];

    /// The coordinate forced to zero, 0-based.
    pub fn zero_col(self) -> usize {
        match self {
            ZeroPair::P12 => 2,
            ZeroPair::P13 => 1,
            ZeroPair::P23 => 0,
        }
    }
}

/// One row block of a plan.
///
/// The modified kinds only exist for three columns:
/// * `Type1(s)`: `s` rows `(m1, m2, x)` sharing `(m1, m2)`, with distinct `x`;
/// * `Type2 { s, pair }`: `s` rows vanishing outside `pair`, pairwise independent;
/// * `Type3(t)`: `t` copies of a single row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockSpec {
    Regular(usize),
    Type1(usize),
    Type2 { s: usize, pair: ZeroPair },
    Type3(usize),
    Padding(usize),
}

impl BlockSpec {
    pub fn rows(&self) -> usize {
        match *self {
            BlockSpec::Regular(s)
            | BlockSpec::Type1(s)
            | BlockSpec::Type2 { s, .. }
            | BlockSpec::Type3(s)
            | BlockSpec::Padding(s) => s,
        }
    }

    /// Singular square submatrices this block adds in an `r x k` matrix.
    /// `None` for a modified kind when `k != 3`.
    pub fn contribution(&self, k: usize, r: usize) -> Option<u128> {
        let c = |n: usize, m: u64| binom(n as u64, m).expect("block sizes are small");
        match *self {
            BlockSpec::Regular(s) => Some(c(s, k as u64)),
            BlockSpec::Padding(_) => Some(0),
            _ if k != 3 => None,
            BlockSpec::Type1(s) => Some(c(s + 1, 3)),
            BlockSpec::Type2 { s, .. } => Some(c(s + 2, 3)),
            // Triples with at least two copies, plus every 2x2 minor on a pair
            // of copies. Some write-ups state the first term as C(t, 2); the
            // census of singular minors gives C(t, 3).
            BlockSpec::Type3(t) => Some(c(t, 3) + c(t, 2) * (r + 3 - t) as u128),
        }
    }

    fn min_rows(&self, k: usize) -> usize {
        match self {
            BlockSpec::Regular(_) => k,
            BlockSpec::Type1(_) | BlockSpec::Type2 { .. } => 1,
            BlockSpec::Type3(_) => 2,
            BlockSpec::Padding(_) => 0,
        }
    }
}

/// Blocks stacked top to bottom into an `r x k` matrix with `target_b_bar`
/// singular square submatrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockPlan {
    blocks: Vec<BlockSpec>,
    r: usize,
    k: usize,
    target_b_bar: u128,
}

impl BlockPlan {
    pub fn new(blocks: Vec<BlockSpec>, r: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input(
                "a block plan needs at least one column".into(),
            ));
        }
        let used: usize = blocks.iter().map(BlockSpec::rows).sum();
        if used != r {
            return Err(Error::Input(format!(
                "blocks use {used} rows, plan has {r}"
            )));
        }
        let mut pairs = Vec::new();
        let mut target = 0u128;
        for block in &blocks {
            if block.rows() < block.min_rows(k) {
                return Err(Error::Input(format!("{block:?} is too small for k = {k}")));
            }
            if let BlockSpec::Type2 { pair, .. } = block {
                if pairs.contains(pair) {
                    return Err(Error::Input(format!("zero pair {pair:?} used twice")));
                }
                pairs.push(*pair);
            }
            target += block
                .contribution(k, r)
                .ok_or_else(|| Error::Input(format!("{block:?} needs exactly 3 columns")))?;
        }
        Ok(Self {
            blocks,
            r,
            k,
            target_b_bar: target,
        })
    }

    /// Appends generic padding up to `r` rows.
    pub fn padded(mut blocks: Vec<BlockSpec>, r: usize, k: usize) -> Result<Self> {
        let used: usize = blocks.iter().map(BlockSpec::rows).sum();
        if used > r {
            return Err(Error::Input(format!(
                "blocks use {used} rows, plan has {r}"
            )));
        }
        if used < r {
            blocks.push(BlockSpec::Padding(r - used));
        }
        Self::new(blocks, r, k)
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn target_b_bar(&self) -> u128 {
        self.target_b_bar
    }
}

/// Row counts `(n_0; n_1, ..., n_l)`: `n_0` generic rows, then `l` hyperplane
/// blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularPartition {
    pub n0: usize,
    pub blocks: Vec<usize>,
}

impl RegularPartition {
    pub fn new(n0: usize, blocks: Vec<usize>) -> Self {
        Self { n0, blocks }
    }

    pub fn rows(&self) -> usize {
        self.n0 + self.blocks.iter().sum::<usize>()
    }

    /// Block index of every row, 0 for the generic rows.
    pub fn row_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n0];
        for (i, &n) in self.blocks.iter().enumerate() {
            labels.extend(std::iter::repeat_n(i + 1, n));
        }
        labels
    }

    pub fn singular_count(&self, k: usize) -> u128 {
        self.blocks
            .iter()
            .map(|&n| binom(n as u64, k as u64).expect("block sizes are small"))
            .sum()
    }

    pub fn to_plan(&self, k: usize) -> Result<BlockPlan> {
        let mut blocks = Vec::with_capacity(self.blocks.len() + 1);
        if self.n0 > 0 {
            blocks.push(BlockSpec::Padding(self.n0));
        }
        blocks.extend(self.blocks.iter().map(|&n| BlockSpec::Regular(n)));
        BlockPlan::new(blocks, self.rows(), k)
    }
}

pub fn sample_regular_matrix(
    partition: &RegularPartition,
    k: usize,
    seed: u64,
) -> Result<IntMatrix> {
    assemble_block_plan(&partition.to_plan(k)?, seed)
}

pub fn assemble_block_plan(plan: &BlockPlan, seed: u64) -> Result<IntMatrix> {
    let (r, k) = (plan.r, plan.k);
    let total = binom((r + k) as u64, k as u64)
        .ok_or_else(|| Error::Input(format!("C({}, {k}) overflows", r + k)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..=MAX_RETRIES {
        let window = BASE_WINDOW << attempt;
        let Some(rows) = Drawer::new(plan, window, &mut rng).draw() else {
            continue;
        };
        let m = IntMatrix::from_rows(k, &rows)?;
        if total - count_square_invertible(&m).bases() == plan.target_b_bar {
            return Ok(m);
        }
    }
    Err(Error::GenericPosition {
        seed,
        attempts: MAX_RETRIES + 1,
    })
}

/// Column pairs and triples, with each pair's position in a wedge.
struct ColumnSets {
    pairs: Vec<(usize, usize)>,
    pair_index: Vec<Vec<usize>>,
    triples: Vec<[usize; 3]>,
}

impl ColumnSets {
    fn new(k: usize) -> Self {
        let pairs: Vec<(usize, usize)> = Combinations::new(k, 2).map(|c| (c[0], c[1])).collect();
        let mut pair_index = vec![vec![usize::MAX; k]; k];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            pair_index[a][b] = i;
        }
        let triples = Combinations::new(k, 3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        Self {
            pairs,
            pair_index,
            triples,
        }
    }

    fn wedge(&self, x: &[i64], y: &[i64]) -> Vec<i128> {
        self.pairs
            .iter()
            .map(|&(a, b)| x[a] as i128 * y[b] as i128 - x[b] as i128 * y[a] as i128)
            .collect()
    }

    fn w(&self, wedge: &[i128], a: usize, b: usize) -> i128 {
        wedge[self.pair_index[a][b]]
    }
}

struct Drawer<'a> {
    plan: &'a BlockPlan,
    /// range of hyperplane lattice coefficients
    window: i64,
    /// range of entries of every other row
    generic_window: i64,
    rng: &'a mut ChaCha8Rng,
    cols: ColumnSets,
    rows: Vec<Vec<i64>>,
    owner: Vec<usize>,
    /// 2x2 minors of every placed pair `(i, j)`, `i < j`, at `j(j-1)/2 + i`.
    wedges: Vec<Vec<i128>>,
}

impl<'a> Drawer<'a> {
    fn new(plan: &'a BlockPlan, window: i64, rng: &'a mut ChaCha8Rng) -> Self {
        // Hyperplane rows have entries up to about `window * (l + 1)`; generic
        // rows get a comparable range, widened for tall or wide matrices where
        // 2x2 coincidences among `C(r, 2) C(k, 2)` minors would otherwise be
        // frequent.
        let hyperplanes = plan
            .blocks
            .iter()
            .filter(|b| matches!(b, BlockSpec::Regular(_)))
            .count();
        let scale = (hyperplanes + 1).max((plan.r * plan.k).div_ceil(32));
        Self {
            plan,
            window,
            generic_window: window * scale as i64,
            rng,
            cols: ColumnSets::new(plan.k),
            rows: Vec::with_capacity(plan.r),
            owner: Vec::with_capacity(plan.r),
            wedges: Vec::new(),
        }
    }

    fn entry(&mut self) -> i64 {
        self.rng.gen_range(1..=self.generic_window)
    }

    fn generic(&mut self) -> Vec<i64> {
        (0..self.plan.k).map(|_| self.entry()).collect()
    }

    fn coefficient(&mut self) -> i64 {
        self.rng.gen_range(1..=self.window)
    }

    /// A random point of the lattice spanned by `e_{i+1} - t e_i`, which is
    /// the integer hyperplane orthogonal to `(1, t, ..., t^{k-1})`.
    fn on_hyperplane(&mut self, t: i64) -> Vec<i64> {
        let k = self.plan.k;
        let w: Vec<i64> = (0..k - 1).map(|_| self.coefficient()).collect();
        (0..k)
            .map(|j| {
                let up = if j >= 1 { w[j - 1] } else { 0 };
                let down = if j + 1 < k { t * w[j] } else { 0 };
                up - down
            })
            .collect()
    }

    fn draw(mut self) -> Option<Vec<Vec<i64>>> {
        let mut hyperplane = 0;
        for (b, &block) in self.plan.blocks.iter().enumerate() {
            match block {
                BlockSpec::Padding(n) => {
                    for _ in 0..n {
                        self.push(b, |d| d.generic())?;
                    }
                }
                BlockSpec::Regular(n) => {
                    hyperplane += 1;
                    for _ in 0..n {
                        self.push(b, |d| d.on_hyperplane(hyperplane))?;
                    }
                }
                BlockSpec::Type1(s) => {
                    let first = self.push(b, |d| d.generic())?;
                    for _ in 1..s {
                        self.push(b, |d| {
                            let x = d.entry();
                            vec![first[0], first[1], x]
                        })?;
                    }
                }
                BlockSpec::Type2 { s, pair } => {
                    for _ in 0..s {
                        self.push(b, |d| {
                            let mut row = d.generic();
                            row[pair.zero_col()] = 0;
                            row
                        })?;
                    }
                }
                BlockSpec::Type3(t) => {
                    let row = self.push(b, |d| d.generic())?;
                    for _ in 1..t {
                        let with_prev = self.wedges_with(&row);
                        self.commit(b, row.clone(), with_prev);
                    }
                }
            }
        }
        Some(self.rows)
    }

    /// Draws candidates until one creates no unintended singular minor of
    /// order at most three with the rows so far.
    fn push(
        &mut self,
        block: usize,
        mut gen: impl FnMut(&mut Self) -> Vec<i64>,
    ) -> Option<Vec<i64>> {
        for _ in 0..ROW_TRIES {
            let row = gen(self);
            if let Some(with_prev) = self.fits(block, &row) {
                self.commit(block, row.clone(), with_prev);
                return Some(row);
            }
        }
        None
    }

    fn wedges_with(&self, row: &[i64]) -> Vec<Vec<i128>> {
        self.rows
            .iter()
            .map(|prev| self.cols.wedge(prev, row))
            .collect()
    }

    fn commit(&mut self, block: usize, row: Vec<i64>, with_prev: Vec<Vec<i128>>) {
        self.wedges.extend(with_prev);
        self.rows.push(row);
        self.owner.push(block);
    }

    /// The row's 2x2 minors against each placed row if it fits, else `None`.
    fn fits(&self, block: usize, row: &[i64]) -> Option<Vec<Vec<i128>>> {
        let k = self.plan.k;
        let kind = self.plan.blocks[block];
        let zero_ok = |c: usize| match kind {
            BlockSpec::Type2 { pair, .. } => pair.zero_col() == c,
            BlockSpec::Regular(_) => k == 1,
            _ => false,
        };
        if (0..k).any(|c| row[c] == 0 && !zero_ok(c)) {
            return None;
        }
        // every forced 2x2 singular lies inside one block
        let pair_ok = |(c1, c2): (usize, usize)| match kind {
            BlockSpec::Type1(_) => (c1, c2) == (0, 1),
            BlockSpec::Type2 { pair, .. } => c1 == pair.zero_col() || c2 == pair.zero_col(),
            BlockSpec::Type3(_) => true,
            BlockSpec::Regular(_) => k == 2,
            BlockSpec::Padding(_) => false,
        };
        let with_prev = self.wedges_with(row);
        for (w, &owner) in with_prev.iter().zip(&self.owner) {
            let same = owner == block;
            for (p, &cols) in self.cols.pairs.iter().enumerate() {
                if w[p] == 0 && !(same && pair_ok(cols)) {
                    return None;
                }
            }
        }
        // modified blocks only exist for k = 3, so below order k every minor
        // must be invertible
        let x = |c: usize| row[c] as i128;
        let cs = &self.cols;
        if k >= 4 {
            for w in &self.wedges {
                for &[a, b, c] in &cs.triples {
                    let det = x(a) * cs.w(w, b, c) - x(b) * cs.w(w, a, c) + x(c) * cs.w(w, a, b);
                    if det == 0 {
                        return None;
                    }
                }
            }
        }
        Some(with_prev)
    }
}

/// Checks minor by minor that the only singular square submatrices of `m` are
/// the `k x k` ones with every row in a single hyperplane block.
pub fn regular_census(m: &IntMatrix, partition: &RegularPartition) -> Result<()> {
    let (r, k) = (m.rows(), m.cols());
    if partition.rows() != r {
        return Err(Error::Dimension(format!(
            "partition covers {} rows, matrix has {r}",
            partition.rows()
        )));
    }
    let label = partition.row_labels();
    for j in 1..=r.min(k) {
        for rows in Combinations::new(r, j) {
            let forced =
                j == k && label[rows[0]] != 0 && rows.iter().all(|&i| label[i] == label[rows[0]]);
            for cols in Combinations::new(k, j) {
                let singular = determinant(&submatrix(m, &rows, &cols)?)? == BigInt::from(0);
                if singular != forced {
                    return Err(Error::Construction(format!(
                        "minor on rows {rows:?}, columns {cols:?} is {}",
                        if singular { "singular" } else { "invertible" }
                    )));
                }
            }
        }
    }
    Ok(())
}
