//! Maiorana–McFarland bent tails.

use crate::bf::TruthTable;
use crate::error::{Error, Result};

/// Bent function on `2k` variables, `f(Y, X) = Y . X xor pi(Y)`, with `X` the
/// low `k` index bits and `Y` the high `k` bits (identity `phi`).
///
/// `want_degree = 2` uses `pi = 0`; `want_degree = k >= 3` uses
/// `pi(Y) = y_1 y_2 ... y_k`, which lifts the degree to `k`.
pub fn mm_bent(k: u32, want_degree: u32) -> Result<TruthTable> {
    if k == 0 || 2 * k > crate::families::component::MAX_TAIL_VARS {
        return Err(Error::InvalidArgument(format!("bent half-width {k} out of range")));
    }
    let with_pi = match want_degree {
        2 => false,
        d if d == k && k >= 3 => true,
        d => {
            return Err(Error::InvalidArgument(format!(
                "bent degree {d} not available for k={k} (allowed: 2{})",
                if k >= 3 { format!(" or {k}") } else { String::new() }
            )))
        }
    };
    let low = (1usize << k) - 1;
    TruthTable::from_fn(2 * k, |i| {
        let x = i & low;
        let y = i >> k;
        let dot = (x & y).count_ones() & 1 == 1;
        dot ^ (with_pi && y == low)
    })
}

/// Degree Construction 1 asks of its `2k`-variable bent tails.
pub fn target_bent_degree(k: u32) -> u32 {
    k.max(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bf::{naive_walsh, nonlinearity, table_degree};

    #[test]
    fn two_variables() {
        let f = mm_bent(1, 2).unwrap();
        assert_eq!(table_degree(&f), 2);
        assert_eq!(nonlinearity(&naive_walsh(&f).unwrap()), 1);
    }

    #[test]
    fn four_variables() {
        let f = mm_bent(2, 2).unwrap();
        let s = naive_walsh(&f).unwrap();
        assert!(s.values().iter().all(|v| v.abs() == 4));
        assert_eq!(nonlinearity(&s), 6);
        assert_eq!(table_degree(&f), 2);
    }

    #[test]
    fn six_variables_degree_three() {
        let f = mm_bent(3, 3).unwrap();
        let s = naive_walsh(&f).unwrap();
        assert!(s.values().iter().all(|v| v.abs() == 8));
        assert_eq!(table_degree(&f), 3);
    }

    #[test]
    fn flat_spectrum_and_target_degree_up_to_twelve_vars() {
        for k in 1..=6 {
            let d = target_bent_degree(k);
            let f = mm_bent(k, d).unwrap();
            let s = crate::bf::fast_walsh(&f).unwrap();
            assert!(s.values().iter().all(|v| v.unsigned_abs() == 1 << k), "k={k}");
            assert_eq!(table_degree(&f), d as i32);
        }
    }

    #[test]
    fn rejects_unavailable_degrees() {
        assert!(mm_bent(1, 1).is_err());
        assert!(mm_bent(2, 3).is_err());
        assert!(mm_bent(4, 3).is_err());
        assert!(mm_bent(0, 2).is_err());
    }
}
