//! Concatenation of truth tables: `f(Y_q, X_p) = g_Y(X_p)`.

use crate::bf::truth_table::check_capacity;
use crate::bf::TruthTable;
use crate::error::{Error, Result};

/// Stack `2^q` tables on `p` variables into one on `p + q` variables.
/// Block `b` occupies indices `b * 2^p .. (b + 1) * 2^p`, so the selector
/// variables `Y` are the high-order index bits.
pub fn concatenate(blocks: &[TruthTable]) -> Result<TruthTable> {
    let count = blocks.len();
    if count == 0 || !count.is_power_of_two() {
        return Err(Error::Shape(format!(
            "block count must be a power of two, got {count}"
        )));
    }
    let p = blocks[0].vars();
    if let Some(bad) = blocks.iter().position(|b| b.vars() != p) {
        return Err(Error::Shape(format!(
            "block {bad} has {} variables, expected {p}",
            blocks[bad].vars()
        )));
    }
    let q = count.trailing_zeros();
    check_capacity(p + q)?;
    let mut out = TruthTable::zeros(p + q)?;
    if p >= 6 {
        let per = blocks[0].words().len();
        for (b, block) in blocks.iter().enumerate() {
            out.words_mut()[b * per..(b + 1) * per].copy_from_slice(block.words());
        }
    } else {
        let width = 1usize << p;
        for (b, block) in blocks.iter().enumerate() {
            for i in 0..width {
                out.set(b * width + i, block.get(i));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_then_one_is_the_selector_variable() {
        let blocks = [TruthTable::zeros(1).unwrap(), TruthTable::ones(1).unwrap()];
        let f = concatenate(&blocks).unwrap();
        assert_eq!(f.bits(), vec![false, false, true, true]);
    }

    #[test]
    fn shape_errors() {
        assert!(concatenate(&[]).is_err());
        let three = vec![TruthTable::zeros(2).unwrap(); 3];
        assert!(concatenate(&three).is_err());
        let mixed = [TruthTable::zeros(2).unwrap(), TruthTable::zeros(3).unwrap()];
        assert!(matches!(concatenate(&mixed), Err(Error::Shape(_))));
    }

    #[test]
    fn word_aligned_blocks() {
        let blocks: Vec<_> = (0..4u64).map(|c| TruthTable::linear(7, c * 5).unwrap()).collect();
        let f = concatenate(&blocks).unwrap();
        for b in 0..4 {
            for i in 0..128 {
                assert_eq!(f.get(b * 128 + i), blocks[b].get(i));
            }
        }
    }
}
