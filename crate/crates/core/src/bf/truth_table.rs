//! Bit-packed truth tables.
//!
//! Bit `i` of a table holds `f(x_1, ..., x_n)` where `x_j` is bit `j - 1` of `i`,
//! so `x_1` is the least-significant index bit. Bits live in little-endian
//! `u64` words; unused high bits of the last word are always zero.

use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

/// Hard ceiling on the variable count, independent of configuration.
pub const ABSOLUTE_MAX_VARS: u32 = 30;

static MAX_VARS: AtomicU32 = AtomicU32::new(ABSOLUTE_MAX_VARS);

/// Currently configured maximum number of variables for materialized tables.
pub fn max_vars() -> u32 {
    MAX_VARS.load(Ordering::Relaxed)
}

/// Lower (or restore) the process-wide variable cap. Values above
/// [`ABSOLUTE_MAX_VARS`] are rejected.
pub fn set_max_vars(n: u32) -> Result<()> {
    if n == 0 || n > ABSOLUTE_MAX_VARS {
        return Err(Error::Capacity(format!(
            "variable cap must be in 1..={ABSOLUTE_MAX_VARS}, got {n}"
        )));
    }
    MAX_VARS.store(n, Ordering::Relaxed);
    Ok(())
}

pub(crate) fn check_capacity(n: u32) -> Result<()> {
    let cap = max_vars();
    if n > cap {
        return Err(Error::Capacity(format!(
            "{n} variables exceeds the configured maximum of {cap}"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn words_for(n: u32) -> usize {
    if n >= 6 {
        1usize << (n - 6)
    } else {
        1
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Truth table of a Boolean function on `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    words: Vec<u64>,
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.n <= 8 {
            write!(f, "TruthTable(n={}, {})", self.n, crate::bf::hexfmt::to_hex(self))
        } else {
            write!(f, "TruthTable(n={}, weight={})", self.n, self.weight())
        }
    }
}

impl TruthTable {
    /// The all-zero function. `n = 0` is allowed and denotes a constant.
    pub fn zeros(n: u32) -> Result<Self> {
        check_capacity(n)?;
        Ok(TruthTable {
            n,
            words: vec![0; words_for(n)],
        })
    }

    pub fn ones(n: u32) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for w in t.words.iter_mut() {
            *w = !0;
        }
        t.clear_padding();
        Ok(t)
    }

    pub fn from_bits(n: u32, bits: &[bool]) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        if bits.len() != t.len() {
            return Err(Error::Shape(format!(
                "expected {} bits for n={n}, got {}",
                t.len(),
                bits.len()
            )));
        }
        for (i, &b) in bits.iter().enumerate() {
            t.set(i, b);
        }
        Ok(t)
    }

    pub fn from_fn(n: u32, f: impl Fn(usize) -> bool) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for i in 0..t.len() {
            if f(i) {
                t.words[i >> 6] |= 1 << (i & 63);
            }
        }
        Ok(t)
    }

    /// Build from raw words. Padding bits above `2^n` must be zero.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        check_capacity(n)?;
        if words.len() != words_for(n) {
            return Err(Error::Shape(format!(
                "expected {} words for n={n}, got {}",
                words_for(n),
                words.len()
            )));
        }
        let t = TruthTable { n, words };
        if n < 6 && t.words[0] >> (1u32 << n) != 0 {
            return Err(Error::Shape("nonzero padding bits".into()));
        }
        Ok(t)
    }

    /// Linear function `mask · X` on `n` variables.
    pub fn linear(n: u32, mask: u64) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        let low = linear_word(mask & 63);
        for (j, w) in t.words.iter_mut().enumerate() {
            let hi = parity(mask & ((j as u64) << 6));
            *w = if hi { !low } else { low };
        }
        t.clear_padding();
        Ok(t)
    }

    pub fn vars(&self) -> u32 {
        self.n
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let bit = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= bit;
        } else {
            self.words[i >> 6] &= !bit;
        }
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Hamming weight of the output column.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() * 2 == self.len() as u64
    }

    pub fn xor_assign(&mut self, other: &TruthTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "cannot xor tables on {} and {} variables",
                self.n, other.n
            )));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    fn clear_padding(&mut self) {
        if self.n < 6 {
            self.words[0] &= (1u64 << (1u32 << self.n)) - 1;
        }
    }
}

/// 64-bit pattern of `mask · x` for `x` in `0..64`, `mask < 64`.
pub(crate) fn linear_word(mask: u64) -> u64 {
    const COLS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    (0..6)
        .filter(|j| mask >> j & 1 == 1)
        .fold(0, |acc, j| acc ^ COLS[j])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_matches_pointwise_parity() {
        for n in 0..9 {
            for mask in [0u64, 1, 3, 5, 0x55, 0xff] {
                let mask = mask & ((1 << n) - 1);
                let t = TruthTable::linear(n, mask).unwrap();
                for x in 0..t.len() {
                    assert_eq!(t.get(x), parity(mask & x as u64), "n={n} mask={mask} x={x}");
                }
            }
        }
    }

    #[test]
    fn rejects_tables_above_the_cap() {
        assert!(matches!(TruthTable::zeros(31), Err(Error::Capacity(_))));
    }

    #[test]
    fn padding_is_kept_clear() {
        let t = TruthTable::ones(2).unwrap();
        assert_eq!(t.words(), &[0b1111]);
        assert_eq!(t.weight(), 4);
        assert!(TruthTable::from_words(2, vec![0x10]).is_err());
    }

    #[test]
    fn from_bits_checks_length() {
        assert!(TruthTable::from_bits(2, &[true, false]).is_err());
        let t = TruthTable::from_bits(2, &[false, true, false, true]).unwrap();
        assert_eq!(t, TruthTable::linear(2, 1).unwrap());
    }
}
