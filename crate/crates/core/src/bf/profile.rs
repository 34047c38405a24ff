//! Composite `(n, m, d, N)` measurement.

use crate::bf::anf::{anf, degree};
use crate::bf::walsh::spectrum_summary;
use crate::bf::TruthTable;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionProfile {
    pub n: u32,
    /// `-1` for unbalanced functions.
    pub resiliency: i32,
    pub degree: i32,
    pub nonlinearity: u64,
    pub balanced: bool,
    pub almost_optimal: bool,
    pub parseval: bool,
}

/// `2^(n-1) - 2^(n/2) <= N < 2^(n-1) - 2^(n/2-1)` for even `n >= 4`.
pub fn is_almost_optimal(n: u32, nonlinearity: u64) -> bool {
    if n < 4 || n % 2 == 1 {
        return false;
    }
    let half = 1u64 << (n - 1);
    let lower = half - (1u64 << (n / 2));
    let upper = half - (1u64 << (n / 2 - 1));
    (lower..upper).contains(&nonlinearity)
}

/// Exhaustive profile from the spectrum and the ANF.
pub fn profile(f: &TruthTable) -> Result<FunctionProfile> {
    let summary = spectrum_summary(f)?;
    let d = degree(&anf(f)?);
    let n = f.vars();
    Ok(FunctionProfile {
        n,
        resiliency: summary.resiliency,
        degree: d,
        nonlinearity: summary.nonlinearity(),
        balanced: summary.resiliency >= 0,
        almost_optimal: is_almost_optimal(n, summary.nonlinearity()),
        parseval: summary.parseval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_weight_three() {
        let p = profile(&TruthTable::linear(3, 0b111).unwrap()).unwrap();
        assert_eq!((p.n, p.resiliency, p.degree, p.nonlinearity), (3, 2, 1, 0));
        assert!(p.balanced);
        assert!(p.parseval);
    }

    #[test]
    fn two_variable_and() {
        let f = TruthTable::from_bits(2, &[false, false, false, true]).unwrap();
        let p = profile(&f).unwrap();
        assert_eq!((p.resiliency, p.degree, p.nonlinearity), (-1, 2, 1));
        assert!(!p.balanced);
    }

    #[test]
    fn almost_optimal_window() {
        // n = 16: [2^15 - 2^8, 2^15 - 2^7)
        assert!(is_almost_optimal(16, 32608));
        assert!(is_almost_optimal(16, 32512));
        assert!(!is_almost_optimal(16, 32511));
        assert!(!is_almost_optimal(16, 32640));
        assert!(!is_almost_optimal(15, 16000));
        assert!(!is_almost_optimal(2, 1));
    }
}
