//! Binomial coefficients in fixed and arbitrary precision.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)`, or `None` if it does not fit in a `u128`.
pub fn binom(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step; split through the gcd to delay overflow.
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        // d | a * num and gcd(a, d) = 1, so d | num.
        debug_assert_eq!(num % d, 0);
        acc = a.checked_mul(num / d)?;
    }
    Some(acc)
}

/// `C(n, k)` clamped to `u128::MAX`.
pub fn binom_sat(n: u64, k: u64) -> u128 {
    binom(n, k).unwrap_or(u128::MAX)
}

pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
