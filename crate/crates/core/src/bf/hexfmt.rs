//! Text format for truth tables:
//!
//! ```text
//! n=<int>
//! <lowercase hex, ceil(2^n / 4) digits>
//! ```
//!
//! Hex digit `j` (left to right) covers table indices `4j..4j+3`, with index
//! `4j` in the most significant bit of the digit. For `n < 2` the unused low
//! bits of the single digit are zero.

use std::fmt::Write as _;

use crate::bf::TruthTable;
use crate::error::{Error, Result};

fn digit_count(n: u32) -> usize {
    (1usize << n).div_ceil(4)
}

pub fn to_hex(t: &TruthTable) -> String {
    let len = t.len();
    let mut s = String::with_capacity(digit_count(t.vars()));
    for j in 0..digit_count(t.vars()) {
        let mut d = 0u32;
        for k in 0..4 {
            let i = 4 * j + k;
            if i < len && t.get(i) {
                d |= 8 >> k;
            }
        }
        s.push(char::from_digit(d, 16).unwrap());
    }
    s
}

/// Parse the hex body for a table on `n` variables. `line` is used for
/// error positions only.
pub fn from_hex(n: u32, hex: &str, line: usize) -> Result<TruthTable> {
    if n > 30 {
        return Err(Error::Capacity(format!("n={n} exceeds the 30-variable format limit")));
    }
    let expected = digit_count(n);
    let hex = hex.trim_end();
    let mut t = TruthTable::zeros(n)?;
    let len = t.len();
    let mut count = 0usize;
    for (col, ch) in hex.chars().enumerate() {
        let d = match ch {
            '0'..='9' | 'a'..='f' => ch.to_digit(16).unwrap(),
            _ => {
                return Err(Error::parse(
                    line,
                    col + 1,
                    format!("expected a lowercase hex digit, found {ch:?}"),
                ))
            }
        };
        if count >= expected {
            return Err(Error::parse(
                line,
                col + 1,
                format!("too many hex digits, expected {expected}"),
            ));
        }
        for k in 0..4 {
            let i = 4 * count + k;
            let bit = d & (8 >> k) != 0;
            if i < len {
                t.set(i, bit);
            } else if bit {
                return Err(Error::parse(line, col + 1, "nonzero padding bits"));
            }
        }
        count += 1;
    }
    if count != expected {
        return Err(Error::parse(
            line,
            count + 1,
            format!("expected {expected} hex digits, found {count}"),
        ));
    }
    Ok(t)
}

/// Render the two-line file body, newline-terminated.
pub fn write_table(t: &TruthTable) -> String {
    let mut s = String::new();
    writeln!(s, "n={}", t.vars()).unwrap();
    writeln!(s, "{}", to_hex(t)).unwrap();
    s
}

/// Parse a `n=<int>` header line.
pub(crate) fn parse_n_line(text: &str, line: usize) -> Result<u32> {
    let text = text.trim_end();
    let rest = text
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(line, 1, "expected `n=<int>`"))?;
    rest.parse::<u32>()
        .map_err(|_| Error::parse(line, 3, format!("invalid variable count {rest:?}")))
}

/// Parse a table starting at `lines[0]`, whose file line number is `first_line`.
/// Returns the table and the number of lines consumed.
pub(crate) fn parse_block(lines: &[&str], first_line: usize) -> Result<TruthTable> {
    let header = lines
        .first()
        .ok_or_else(|| Error::parse(first_line, 1, "missing `n=<int>` line"))?;
    let n = parse_n_line(header, first_line)?;
    let body = lines
        .get(1)
        .ok_or_else(|| Error::parse(first_line + 1, 1, "missing hex line"))?;
    from_hex(n, body, first_line + 1)
}

pub fn read_table(text: &str) -> Result<TruthTable> {
    let lines: Vec<&str> = text.lines().collect();
    let t = parse_block(&lines, 1)?;
    if let Some(i) = lines.iter().skip(2).position(|l| !l.trim().is_empty()) {
        return Err(Error::parse(i + 3, 1, "unexpected trailing content"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_layout_puts_low_index_in_msb() {
        // f = x1 on two variables: bits [0,1,0,1] -> 0b0101
        let t = TruthTable::from_bits(2, &[false, true, false, true]).unwrap();
        assert_eq!(to_hex(&t), "5");
        let t = TruthTable::from_bits(3, &[true, false, false, false, false, false, false, true]).unwrap();
        assert_eq!(to_hex(&t), "81");
    }

    #[test]
    fn tiny_tables_pad_low_bits() {
        let t = TruthTable::from_bits(1, &[false, true]).unwrap();
        assert_eq!(to_hex(&t), "4");
        assert_eq!(from_hex(1, "4", 2).unwrap(), t);
        assert!(from_hex(1, "5", 2).is_err());
        let c = TruthTable::ones(0).unwrap();
        assert_eq!(to_hex(&c), "8");
    }

    #[test]
    fn truncated_file_reports_position() {
        let err = read_table("n=4\nabc\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_table("n=3\n").is_err());
        assert!(read_table("x=3\n00\n").is_err());
        assert!(read_table("n=3\nAB\n").is_err());
    }

    #[test]
    fn file_round_trip() {
        let t = TruthTable::from_fn(7, |i| (i * 37 + 11) % 5 < 2).unwrap();
        assert_eq!(read_table(&write_table(&t)).unwrap(), t);
    }
}
