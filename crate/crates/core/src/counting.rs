//! Basis counting for linear matroids `A = (I_r | M)`.
//!
//! The bases of `(I_r | M)` are in bijection with the invertible square
//! submatrices of `M` (the empty submatrix included), so the basis count of an
//! `(r + k)`-element matroid can be read off the `r x k` block alone. Two
//! independent routes are provided: [`count_square_invertible`] works on `M`,
//! and [`count_bases_direct`] enumerates the `r`-subsets of columns of `A`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::binomial::binom_big;
use crate::combinations::Combinations;
use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, rank, IntMatrix};
use crate::par::{self, Execution};

/// Basis count of `(I_r | M)` for an `r x k` matrix `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCount {
    pub r: usize,
    pub k: usize,
    /// Invertible square submatrices of `M`, i.e. bases of `(I_r | M)`.
    pub b: BigUint,
    /// Singular square submatrices; `b + b_bar = C(r + k, r)`.
    pub b_bar: BigUint,
}

impl BasisCount {
    fn new(r: usize, k: usize, b: BigUint) -> Self {
        let total = binom_big((r + k) as u64, r as u64);
        let b_bar = total - &b;
        Self { r, k, b, b_bar }
    }

    /// `b` as a machine integer. Every count this crate can enumerate fits.
    pub fn bases(&self) -> u128 {
        self.b
            .to_u128()
            .expect("enumerated basis count exceeds u128")
    }

    /// `b_bar` as a machine integer, if it fits.
    pub fn singular(&self) -> Option<u128> {
        self.b_bar.to_u128()
    }
}

/// Counts the invertible square submatrices of `m`, including the empty one.
pub fn count_square_invertible(m: &IntMatrix) -> BasisCount {
    count_square_invertible_with(m, Execution::default())
}

pub fn count_square_invertible_with(m: &IntMatrix, exec: Execution) -> BasisCount {
    let b = kernel::count(m, exec);
    BasisCount::new(m.rows(), m.cols(), BigUint::from(b))
}

/// Baseline count: one Bareiss determinant per minor, enumerated by size `j`,
/// then row subsets, then column subsets, all lexicographic.
pub fn count_square_invertible_naive(m: &IntMatrix) -> BasisCount {
    let (r, k) = (m.rows(), m.cols());
    let mut b = BigUint::zero();
    for j in 0..=r.min(k) {
        for rows in Combinations::new(r, j) {
            for cols in Combinations::new(k, j) {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&c| m.get(i, c).clone()).collect())
                    .collect();
                if !bareiss_det(minor).is_zero() {
                    b += 1u32;
                }
            }
        }
    }
    BasisCount::new(r, k, b)
}

/// Counts the bases of the column matroid of `a` by testing every `r`-subset
/// of its columns. Deliberately naive: this is the oracle for the other route.
pub fn count_bases_direct(a: &IntMatrix) -> Result<BigUint> {
    let (r, n) = (a.rows(), a.cols());
    let found = rank(a);
    if found != r {
        return Err(Error::Rank { expected: r, found });
    }
    let mut b = BigUint::zero();
    for cols in Combinations::new(n, r) {
        let minor: Vec<Vec<BigInt>> = (0..r)
            .map(|i| cols.iter().map(|&c| a.get(i, c).clone()).collect())
            .collect();
        if !bareiss_det(minor).is_zero() {
            b += 1u32;
        }
    }
    Ok(b)
}

/// `M -> M^T`. The count of invertible square submatrices is invariant under it,
/// which is the rank/corank duality `(I_r | M) <-> (I_k | M^T)`.
pub fn duality_transform(m: &IntMatrix) -> IntMatrix {
    m.transpose()
}

/// `(I_r | M)`.
pub fn standard_representation(m: &IntMatrix) -> IntMatrix {
    IntMatrix::identity(m.rows())
        .hstack(m)
        .expect("identity has matching row count")
}

mod kernel {
    //! Exact counting by depth-first search over row subsets.
    //!
    //! For a fixed column set `C` of size `j`, rows are added one at a time and
    //! the exterior product of the chosen rows is carried along: its entries are
    //! exactly the minors of the chosen rows on every subset of `C`. A zero
    //! exterior product means the prefix is dependent, which prunes the whole
    //! subtree. At depth `j - 1` the exterior product is (up to sign) the
    //! cofactor vector, so each completion costs one dot product, which is the
    //! `j x j` determinant by Laplace expansion along the last row.
    //!
    //! Every partial sum is bounded by `j! * E^j` for the largest entry `E`, so
    //! the kernel runs in `i64` or `i128` whenever that bound fits and falls back
    //! to arbitrary precision otherwise. Results are exact in every tier.

    use super::*;

    pub(super) trait Ring: Clone + Send + Sync {
        fn zero() -> Self;
        fn is_zero(&self) -> bool;
        /// `acc += sign * a * b`
        fn fma(acc: &mut Self, negate: bool, a: &Self, b: &Self);
        fn neg(&self) -> Self;
        fn from_big(v: &BigInt) -> Self;
    }

    macro_rules! machine_ring {
        ($t:ty, $conv:ident) => {
            impl Ring for $t {
                #[inline(always)]
                fn zero() -> Self {
                    0
                }
                #[inline(always)]
                fn is_zero(&self) -> bool {
                    *self == 0
                }
                #[inline(always)]
                fn fma(acc: &mut Self, negate: bool, a: &Self, b: &Self) {
                    if negate {
                        *acc -= a * b;
                    } else {
                        *acc += a * b;
                    }
                }
                #[inline(always)]
                fn neg(&self) -> Self {
                    -*self
                }
                fn from_big(v: &BigInt) -> Self {
                    v.$conv()
                        .expect("entry bound checked before tier selection")
                }
            }
        };
    }
    machine_ring!(i64, to_i64);
    machine_ring!(i128, to_i128);

    impl Ring for BigInt {
        fn zero() -> Self {
            Zero::zero()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn fma(acc: &mut Self, negate: bool, a: &Self, b: &Self) {
            let p = a * b;
            if negate {
                *acc -= p;
            } else {
                *acc += p;
            }
        }
        fn neg(&self) -> Self {
            -self
        }
        fn from_big(v: &BigInt) -> Self {
            v.clone()
        }
    }

    /// One term of the Laplace expansion producing a level-`d + 1` entry.
    #[derive(Clone, Copy)]
    struct Term {
        /// column position within `C` contributed by the new row
        col: usize,
        /// index of the complementary level-`d` entry
        src: usize,
        negate: bool,
    }

    /// Exterior-algebra bookkeeping for column sets of size `j`.
    struct Layout {
        j: usize,
        /// `levels[d][t]`: the Laplace terms for the `t`-th mask of size `d`
        levels: Vec<Vec<Vec<Term>>>,
        /// for the normal vector: index in level `j - 1` of `C \ {m}`, and sign
        normal: Vec<(usize, bool)>,
    }

    impl Layout {
        fn new(j: usize) -> Self {
            let mut masks: Vec<Vec<u32>> = vec![Vec::new(); j + 1];
            for mask in 0u32..(1 << j) {
                masks[mask.count_ones() as usize].push(mask);
            }
            let index_of = |d: usize, mask: u32| -> usize {
                masks[d].binary_search(&mask).expect("mask present")
            };
            let mut levels = vec![Vec::new()];
            for (d, ms) in masks.iter().enumerate().skip(1) {
                let mut level = Vec::with_capacity(ms.len());
                for &mask in ms {
                    let mut terms = Vec::with_capacity(d);
                    let mut p = 0;
                    for col in 0..j {
                        if mask >> col & 1 == 1 {
                            // new row sits at position d - 1, its entry at column rank p
                            terms.push(Term {
                                col,
                                src: index_of(d - 1, mask & !(1 << col)),
                                negate: (d - 1 + p) % 2 == 1,
                            });
                            p += 1;
                        }
                    }
                    level.push(terms);
                }
                levels.push(level);
            }
            let full = (1u32 << j) - 1;
            let normal = (0..j)
                .map(|m| (index_of(j - 1, full & !(1 << m)), (j - 1 + m) % 2 == 1))
                .collect();
            Self { j, levels, normal }
        }

        fn width(&self, d: usize) -> usize {
            if d == 0 {
                1
            } else {
                self.levels[d].len()
            }
        }
    }

    /// Rows of `M` restricted to one column set, with all-zero rows dropped.
    struct Block<T> {
        layout_j: usize,
        rows: usize,
        data: Vec<T>,
    }

    impl<T: Ring> Block<T> {
        fn row(&self, i: usize) -> &[T] {
            &self.data[i * self.layout_j..(i + 1) * self.layout_j]
        }
    }

    pub(super) fn count(m: &IntMatrix, exec: Execution) -> u128 {
        let mut m = strip_zero_lines(m);
        if m.rows() == 0 || m.cols() == 0 {
            return 1;
        }
        // column subsets are enumerated as bitmasks, so put the short side there
        if m.cols() > m.rows() {
            m = m.transpose();
        }
        assert!(
            m.cols() < 64,
            "both sides of the matrix exceed 63 nonzero lines"
        );
        let jmax = m.rows().min(m.cols());
        match tier(&m.max_abs(), jmax) {
            Tier::I64 => count_in::<i64>(&m, exec),
            Tier::I128 => count_in::<i128>(&m, exec),
            Tier::Big => count_in::<BigInt>(&m, exec),
        }
    }

    #[derive(Debug, PartialEq, Eq)]
    pub(super) enum Tier {
        I64,
        I128,
        Big,
    }

    /// Picks the narrowest integer type in which no partial sum can overflow.
    pub(super) fn tier(max_abs: &BigInt, jmax: usize) -> Tier {
        let e = max_abs.abs();
        let mut bound = BigInt::one();
        let mut worst = BigInt::one();
        for j in 1..=jmax {
            bound = bound * &e * BigInt::from(j);
            if bound > worst {
                worst = bound.clone();
            }
        }
        // leave headroom for the accumulator's sign
        if worst < (BigInt::one() << 62) {
            Tier::I64
        } else if worst < (BigInt::one() << 126) {
            Tier::I128
        } else {
            Tier::Big
        }
    }

    fn strip_zero_lines(m: &IntMatrix) -> IntMatrix {
        let keep_rows: Vec<usize> = (0..m.rows())
            .filter(|&i| m.row(i).iter().any(|v| !Zero::is_zero(v)))
            .collect();
        let keep_cols: Vec<usize> = (0..m.cols())
            .filter(|&j| (0..m.rows()).any(|i| !Zero::is_zero(m.get(i, j))))
            .collect();
        if keep_rows.len() == m.rows() && keep_cols.len() == m.cols() {
            return m.clone();
        }
        crate::linalg::submatrix(m, &keep_rows, &keep_cols).expect("indices are in range")
    }

    fn count_in<T: Ring>(m: &IntMatrix, exec: Execution) -> u128 {
        let k = m.cols();
        let jmax = m.rows().min(k);
        let layouts: Vec<Layout> = (0..=jmax).map(Layout::new).collect();

        let mut blocks: Vec<(Block<T>, usize)> = Vec::new();
        for mask in 1u64..(1u64 << k) {
            let j = mask.count_ones() as usize;
            if j > jmax {
                continue;
            }
            let cols: Vec<usize> = (0..k).filter(|&c| mask >> c & 1 == 1).collect();
            let mut data = Vec::new();
            let mut rows = 0;
            for i in 0..m.rows() {
                let row: Vec<&BigInt> = cols.iter().map(|&c| m.get(i, c)).collect();
                if row.iter().all(|v| Zero::is_zero(*v)) {
                    continue;
                }
                data.extend(row.into_iter().map(T::from_big));
                rows += 1;
            }
            if rows >= j {
                blocks.push((
                    Block {
                        layout_j: j,
                        rows,
                        data,
                    },
                    j,
                ));
            }
        }

        let mut tasks = Vec::new();
        for (bi, (block, j)) in blocks.iter().enumerate() {
            if *j == 1 {
                // every kept row is a nonzero 1x1 minor
                tasks.push((bi, usize::MAX));
            } else {
                for first in 0..=block.rows - j {
                    tasks.push((bi, first));
                }
            }
        }

        1 + par::sum(exec, tasks, |(bi, first)| {
            let (block, j) = &blocks[bi];
            if first == usize::MAX {
                return block.rows as u128;
            }
            let layout = &layouts[*j];
            let mut levels: Vec<Vec<T>> =
                (1..*j).map(|d| vec![T::zero(); layout.width(d)]).collect();
            levels[0].clone_from_slice(block.row(first));
            descend(layout, block, &mut levels, 1, first + 1)
        })
    }

    /// Counts independent `j`-sets extending a `depth`-row prefix, using rows
    /// from `start` on. `levels[0]` holds the prefix's exterior product and the
    /// remaining slots are scratch for deeper levels.
    fn descend<T: Ring>(
        layout: &Layout,
        block: &Block<T>,
        levels: &mut [Vec<T>],
        depth: usize,
        start: usize,
    ) -> u128 {
        let j = layout.j;
        if depth == j - 1 {
            let w = &levels[0];
            let normal: Vec<T> = layout
                .normal
                .iter()
                .map(|&(src, negate)| if negate { w[src].neg() } else { w[src].clone() })
                .collect();
            let mut hits = 0u128;
            for i in start..block.rows {
                let x = block.row(i);
                let mut dot = T::zero();
                for (a, b) in normal.iter().zip(x) {
                    T::fma(&mut dot, false, a, b);
                }
                if !dot.is_zero() {
                    hits += 1;
                }
            }
            return hits;
        }
        let need = j - depth;
        let mut total = 0u128;
        let (cur, rest) = levels.split_at_mut(1);
        let prev = &cur[0];
        let next_level = &layout.levels[depth + 1];
        if block.rows < need {
            return 0;
        }
        for i in start..=block.rows - need {
            let x = block.row(i);
            let next = &mut rest[0];
            let mut nonzero = false;
            for (slot, terms) in next.iter_mut().zip(next_level) {
                let mut acc = T::zero();
                for t in terms {
                    T::fma(&mut acc, t.negate, &x[t.col], &prev[t.src]);
                }
                nonzero |= !acc.is_zero();
                *slot = acc;
            }
            if nonzero {
                total += descend(layout, block, rest, depth + 1, i + 1);
            }
        }
        total
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn tier_selection() {
            assert_eq!(tier(&BigInt::from(1), 3), Tier::I64);
            assert_eq!(tier(&BigInt::from(1600), 5), Tier::I64);
            assert_eq!(tier(&BigInt::from(1i64 << 20), 5), Tier::I128);
            assert_eq!(tier(&BigInt::from(1i64 << 40), 5), Tier::Big);
        }

        #[test]
        fn layout_signs_reproduce_determinant() {
            // det of [[1,2,3],[4,5,6],[7,8,10]] = -3 via the kernel's expansion
            let rows = [[1i64, 2, 3], [4, 5, 6], [7, 8, 10]];
            let layout = Layout::new(3);
            let w1: Vec<i64> = rows[0].to_vec();
            let mut w2 = vec![0i64; layout.width(2)];
            for (slot, terms) in w2.iter_mut().zip(&layout.levels[2]) {
                for t in terms {
                    i64::fma(slot, t.negate, &rows[1][t.col], &w1[t.src]);
                }
            }
            let det: i64 = layout
                .normal
                .iter()
                .enumerate()
                .map(|(m, &(src, neg))| if neg { -w2[src] } else { w2[src] } * rows[2][m])
                .sum();
            assert_eq!(det, -3);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    fn appendix_20() -> IntMatrix {
        mat(3, &[&[1, 1, 1], &[1, 2, 3], &[1, 3, 6]])
    }

    #[test]
    fn zero_matrix_has_only_the_empty_minor() {
        let c = count_square_invertible(&IntMatrix::zeros(4, 2));
        assert_eq!(c.bases(), 1);
        assert_eq!(c.singular(), Some(14));
    }

    #[test]
    fn pascal_block_has_twenty() {
        let c = count_square_invertible(&appendix_20());
        assert_eq!(c.bases(), 20);
        assert_eq!(c.singular(), Some(0));
    }

    #[test]
    fn corank_two_table_entry_four() {
        let c = count_square_invertible(&mat(2, &[&[1, 0], &[0, 1], &[0, 0]]));
        assert_eq!(c.bases(), 4);
    }

    #[test]
    fn two_by_two_all_ones() {
        // 1 empty + 4 unit entries + singular 2x2
        assert_eq!(
            count_square_invertible(&mat(2, &[&[1, 1], &[1, 1]])).bases(),
            5
        );
    }

    #[test]
    fn degenerate_shapes() {
        for (r, k) in [(0, 0), (3, 0), (0, 4)] {
            let c = count_square_invertible(&IntMatrix::zeros(r, k));
            assert_eq!(c.bases(), 1);
        }
    }

    #[test]
    fn direct_count_examples() {
        assert_eq!(
            count_bases_direct(&IntMatrix::identity(3)).unwrap(),
            1u32.into()
        );
        let a = standard_representation(&appendix_20());
        assert_eq!(count_bases_direct(&a).unwrap(), 20u32.into());
        let a = standard_representation(&mat(1, &[&[1], &[1]]));
        assert_eq!(count_bases_direct(&a).unwrap(), 3u32.into());
    }

    #[test]
    fn direct_count_rejects_rank_deficiency() {
        let a = mat(3, &[&[1, 2, 3], &[2, 4, 6]]);
        assert!(matches!(
            count_bases_direct(&a),
            Err(Error::Rank {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn duality_examples() {
        let empty = duality_transform(&IntMatrix::zeros(0, 0));
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
        let m = mat(2, &[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(duality_transform(&m), mat(3, &[&[1, 3, 5], &[2, 4, 6]]));
        let t = duality_transform(&appendix_20());
        assert_eq!(count_square_invertible(&t).bases(), 20);
    }

    #[test]
    fn tiers_agree_on_large_entries() {
        // entries around 2^21 push a 4x4 count into the i128 tier, 2^40 into BigInt
        for scale in [1i64 << 21, 1i64 << 40] {
            let rows: Vec<Vec<i64>> = (0..6)
                .map(|i| {
                    (0..4)
                        .map(|j| scale - ((i * 5 + j * 3 + i * j) % 7) as i64)
                        .collect()
                })
                .collect();
            let m = IntMatrix::from_rows(4, &rows).unwrap();
            assert_eq!(
                count_square_invertible(&m),
                count_square_invertible_naive(&m)
            );
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let rows: Vec<Vec<i64>> = (0..9)
            .map(|i| {
                (0..4)
                    .map(|j| ((i * 7 + j * 11 + i * j) % 5) as i64 - 2)
                    .collect()
            })
            .collect();
        let m = IntMatrix::from_rows(4, &rows).unwrap();
        let a = count_square_invertible_with(&m, Execution::Sequential);
        let b = count_square_invertible_with(&m, Execution::Parallel);
        assert_eq!(a, b);
        assert_eq!(a, count_square_invertible_naive(&m));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn kernel_matches_naive(
            (r, k, vals) in (0usize..7, 0usize..7).prop_flat_map(|(r, k)| {
                (Just(r), Just(k), proptest::collection::vec(-3i64..=3, r * k))
            })
        ) {
            let rows: Vec<Vec<i64>> = vals.chunks(k.max(1)).take(r).map(|c| c.to_vec()).collect();
            let m = if k == 0 { IntMatrix::zeros(r, 0) } else { IntMatrix::from_rows(k, &rows).unwrap() };
            prop_assert_eq!(count_square_invertible(&m), count_square_invertible_naive(&m));
        }
    }
}
