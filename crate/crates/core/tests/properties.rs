use matroid_forge::binomial::binom;
use matroid_forge::par::Execution;
use matroid_forge::solver::{table_with, DEFAULT_TABLE_CAP};
use matroid_forge::{count_bases_direct, solve, SolveOutcome};
use proptest::prelude::*;

#[test]
fn tags_symmetric_under_duality() {
    for n in 1..=10u64 {
        for r in 1..n {
            for b in 1..=binom(n, r).unwrap() {
                let a = solve(n, r, b, 0).unwrap();
                let d = solve(n, n - r, b, 0).unwrap();
                assert_eq!(a.tag(), d.tag(), "(n={n}, r={r}, b={b})");
            }
        }
    }
}

#[test]
fn never_unknown_up_to_three_columns() {
    for (n, r) in [(13, 10), (14, 11), (9, 6), (12, 2)] {
        for row in table_with(n, r, DEFAULT_TABLE_CAP, 0, Execution::default()).unwrap() {
            assert!(
                row.tag == "CONSTRUCTED" || (n, r.min(n - r), row.b) == (6, 3, 11),
                "(n={n}, r={r}, b={}) gave {}",
                row.b,
                row.tag
            );
        }
    }
}

#[test]
fn sequential_and_parallel_tables_agree() {
    let seq = table_with(12, 9, DEFAULT_TABLE_CAP, 5, Execution::Sequential).unwrap();
    let par = table_with(12, 9, DEFAULT_TABLE_CAP, 5, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_match_direct_oracle(n in 2u64..=12, r_frac in 0.0f64..1.0, b_frac in 0.0f64..1.0, seed: u64) {
        let r = 1 + ((n - 1) as f64 * r_frac) as u64;
        let total = binom(n, r).unwrap();
        let b = 1 + ((total - 1) as f64 * b_frac) as u128;
        match solve(n, r, b, seed).unwrap() {
            SolveOutcome::Constructed(w) => {
                prop_assert!(w.verified);
                prop_assert_eq!((w.matrix.rows() as u64, w.matrix.cols() as u64), (r, n - r));
                prop_assert_eq!(count_bases_direct(&w.full_matrix()).unwrap(), b.into());
            }
            SolveOutcome::KnownNonexistent => prop_assert_eq!((n, r.min(n - r), b), (6, 3, 11)),
            SolveOutcome::Unknown(why) => prop_assert!(r.min(n - r) >= 4, "unknown at three columns: {}", why),
        }
    }

    #[test]
    fn deterministic_in_seed(r in 11u64..70, b_frac in 0.0f64..1.0, seed: u64) {
        let total = binom(r + 3, 3).unwrap();
        let b = 1 + ((total - 1) as f64 * b_frac) as u128;
        prop_assert_eq!(solve(r + 3, r, b, seed).unwrap(), solve(r + 3, r, b, seed).unwrap());
    }
}
