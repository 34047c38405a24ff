//! Exact family sizes and deficits as big integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn pow2(e: u32) -> BigUint {
    BigUint::one() << e as usize
}

pub fn binom(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{j=0}^{upto} C(t, j)`, empty (zero) for negative `upto`.
pub fn binom_prefix(t: u32, upto: i64) -> BigUint {
    if upto < 0 {
        return BigUint::zero();
    }
    if upto as u64 >= t as u64 {
        return pow2(t);
    }
    let mut term = BigUint::one();
    let mut acc = BigUint::one();
    for j in 1..=upto as u32 {
        term *= t - j + 1;
        term /= j;
        acc += &term;
    }
    acc
}

/// `sum_{j > above}^{t} C(t, j)`: masks on `t` bits of weight exceeding `above`.
pub fn binom_tail(t: u32, above: i64) -> BigUint {
    pow2(t) - binom_prefix(t, above)
}

/// Masks left to fill after all of `Gamma_0`: `sum_{i=0}^{m} C(n/2, i)`.
pub fn deficit(n: u32, m: u32) -> BigUint {
    binom_prefix(n / 2, m as i64)
}

pub fn gamma0_size(n: u32, m: u32) -> BigUint {
    binom_tail(n / 2, m as i64)
}

/// `|Gamma_k|` (and `|Omega_k|` with `e = 0`).
pub fn gamma_k_size(n: u32, m: u32, k: u32) -> BigUint {
    omega_k_size(n, m, k, 0)
}

/// `|Omega_k| = sum_{j > m - e} C(n/2 - 2k, j)`; zero when `2k > n/2`.
pub fn omega_k_size(n: u32, m: u32, k: u32, e: u32) -> BigUint {
    match (n / 2).checked_sub(2 * k) {
        Some(t) => binom_tail(t, m as i64 - e as i64),
        None => BigUint::zero(),
    }
}

/// `|Gamma'_0| = |Gamma_0| - 2^(n/2-m-1) + 1`.
pub fn gamma0_prime_size(n: u32, m: u32) -> BigUint {
    let p = n / 2;
    if m + 1 > p {
        return BigUint::zero();
    }
    gamma0_size(n, m) + 1u32 - pow2(p - m - 1)
}
